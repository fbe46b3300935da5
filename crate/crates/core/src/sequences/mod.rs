//! Vector sequences, reconstruction operators and their finite truncations.
//!
//! Every shipped sequence is adapted to the standard coordinate basis, so a
//! truncation of a diagonal or block-repeated family is exact rather than an
//! approximation.

mod operator;
mod sequence;
mod sparse;
mod truncation;

pub use operator::ReconstructionOperator;
pub use sequence::{
    DeltaRule, ExponentialSystem, IndexSet, StructureTag, SupNorm, VectorSequence,
    CONSTRUCTION_HORIZON,
};
pub use sparse::SparseVector;
pub use truncation::TruncationFrame;
