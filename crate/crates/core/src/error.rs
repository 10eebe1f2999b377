use thiserror::Error;

/// Errors raised by the operator algebra, POVM calculus and experiment builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("empty operator sequence")]
    Empty,

    #[error(
        "coherent amplitude |alpha|={amplitude} loses Poisson tail mass {tail:e} beyond D={truncation} \
         (tolerance {tolerance:e})"
    )]
    Truncation {
        amplitude: f64,
        truncation: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("operator {index} is not Hermitian (residual {residual:e})")]
    NotHermitian { index: usize, residual: f64 },

    #[error("operator {index} is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { index: usize, min_eigenvalue: f64 },

    #[error("operators do not sum to the identity (residual {residual:e})")]
    NotComplete { residual: f64 },

    #[error("no representation in the target span: outcome {outcome} has residual {residual:e}")]
    NoRepresentation { outcome: usize, residual: f64 },

    #[error("representation is not a stochastic mixture: lambda[{row}][{col}] = {value:e}")]
    NegativeCoefficients { row: usize, col: usize, value: f64 },

    #[error("column {col} of the non-ideality matrix sums to {sum}")]
    NotStochastic { col: usize, sum: f64 },

    #[error("operators are linearly dependent in Hilbert-Schmidt space (rank {rank} of {len})")]
    LinearDependence { rank: usize, len: usize },

    #[error("basis is not orthonormal (residual {residual:e})")]
    NonOrthonormal { residual: f64 },

    #[error("not a density operator: {0}")]
    InvalidDensity(String),

    #[error("operator dimension {dim} is not divisible by the atom dimension {atom_dim}")]
    NotDivisible { dim: usize, atom_dim: usize },

    #[error("parameters outside the closed-form regime: {0}")]
    OutsideClosedFormRegime(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate eigenvalues: {0}")]
    Degenerate(String),

    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
