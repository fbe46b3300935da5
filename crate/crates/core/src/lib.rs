//! Finite-scale laboratory for sequences that do frame reconstruction.
//!
//! A sequence `{f_n}` in a Hilbert space *does frame reconstruction* with a
//! bounded operator `B` when `f = Σ ⟨f, B f_n⟩ f_n` for every `f`. Such a
//! sequence need not be a frame. This crate realises the objects involved at
//! a fixed truncation scale and measures the properties that the theory
//! predicts for them:
//!
//! - [`linalg`]: Hermitian eigensolver, SVD, pseudo-inverse, PSD square root.
//! - [`sequences`]: vector sequences, reconstruction operators, truncations.
//! - [`analysis`]: frame bounds, Parseval/Riesz checks, biorthogonal systems.
//! - [`reconstruction`]: the reconstruction test itself and its theorem batteries.
//! - [`perturbation`]: ℓ¹ stability budget and perturbed reconstruction operators.
//! - [`measures`]: Fourier coefficients of measures, Kaczmarz, A₂ weights and
//!   weighted exponential systems.
//! - [`cli`]: config-driven experiment runner used by the `framerecon` binary.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod measures;
pub mod perturbation;
pub mod reconstruction;
pub mod report;
pub mod sequences;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use report::{Check, CheckRole, PropertyReport};
pub use sequences::{
    IndexSet, ReconstructionOperator, SparseVector, StructureTag, TruncationFrame, VectorSequence,
};
