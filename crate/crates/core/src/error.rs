use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: relative symmetry residual {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semi-definite: smallest eigenvalue {min_eig:.3e} (largest {max_eig:.3e})")]
    NotPsd { min_eig: f64, max_eig: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular at pivot {index}")]
    Singular { index: usize },
    #[error("coefficient c_{index} = {value} must be positive")]
    NonPositiveCoefficient { index: usize, value: f64 },
    #[error("truncation after {entries} entries splits block {block}; cut at a block boundary")]
    MidBlockTruncation { entries: usize, block: usize },
    #[error(
        "family is not linearly independent: entry {index} lies in the span of its predecessors"
    )]
    NotABasis { index: usize },
    #[error("truncated family does not span: frame operator has rank {rank} in dimension {dim} (deficient by {deficiency})", deficiency = dim - rank)]
    RankDeficient { dim: usize, rank: usize },
    #[error("operation requires a {expected} sequence, got {found}")]
    UnsupportedStructure {
        expected: &'static str,
        found: String,
    },
    #[error("entry {index} is the zero vector")]
    ZeroVector { index: i64 },
    #[error("sequence norms are unbounded; a finite supremum is required")]
    UnboundedSequence,
    #[error("base sequence is degenerate: supremum of norms is zero")]
    DegenerateBase,
    #[error("perturbation spends {spent} of an admissible budget {budget}")]
    InadmissiblePerturbation { spent: f64, budget: f64 },
    #[error("operator is numerically singular: condition number {cond:.3e}")]
    IllConditioned { cond: f64 },
    #[error("measure must be a probability measure (total mass {mass})")]
    Normalization { mass: f64 },
    #[error("weight must be bounded below by a positive constant (floor {floor})")]
    NotBoundedBelow { floor: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
