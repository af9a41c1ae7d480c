use thiserror::Error;

/// Errors raised by the certification engine and its supporting modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix {matrix} has a non-finite entry at ({row}, {col})")]
    NonFinite {
        matrix: String,
        row: usize,
        col: usize,
    },

    #[error("matrix {matrix} has a negative entry {value:e} at ({row}, {col})")]
    NegativeEntry {
        matrix: String,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("factorization is not exact: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotExact { residual: f64, tolerance: f64 },

    #[error("rank deficient: {what} has numeric rank {found}, expected {expected}")]
    RankDeficient {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("point is not in the outer polytope: {0}")]
    NotInPolytope(String),

    #[error("linear program failed: {0}")]
    NumericalFailure(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid nested-polytope solution: {0}")]
    InvalidSolution(String),

    #[error("invalid nested-polytope instance: {0}")]
    InvalidNpp(String),

    #[error("rendering requires a 2-D instance, got dimension {0}")]
    UnsupportedDimension(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
