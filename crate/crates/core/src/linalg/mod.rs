//! Dense complex linear algebra used throughout the crate.
//!
//! Every routine is a pure function of its inputs. Tolerances are relative to
//! the largest spectral magnitude of the operand.

pub mod eigen;
pub mod lu;
pub mod matrix;
pub mod random;
pub mod svd;

pub use eigen::{hermitian_eig, hermitian_eigenvalues, HermitianEigen};
pub use lu::{inverse, solve, Lu};
pub use matrix::{inner, norm, ComplexMatrix, ComplexVector, C64, ONE, ZERO};
pub use svd::{op_norm, pinv, psd_sqrt, svd, Svd, DEFAULT_RANK_TOL, PSD_TOL};
