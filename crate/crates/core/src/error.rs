use thiserror::Error;

/// Failure category, used by front ends to pick exit codes and exception types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    InvalidMetric,
    SizeLimit,
    Precondition,
    Io,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("nonzero diagonal entry at ({0}, {0})")]
    NonzeroDiagonal(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("off-diagonal entry ({0}, {1}) must be positive")]
    NegativeOrZeroOffDiagonal(usize, usize),
    #[error("triangle inequality violated: d({0},{1}) > d({0},{2}) + d({2},{1})")]
    TriangleViolation(usize, usize, usize),

    #[error("empty subset")]
    EmptySubset,
    #[error("empty relation")]
    EmptyRelation,
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("relation is not a correspondence (a projection is not surjective)")]
    NotACorrespondence,
    #[error("scale factor must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("invalid block count k = {k} for n = {n}")]
    InvalidK { n: usize, k: usize },
    #[error("partition has a single block; alpha is undefined")]
    SingleBlock,
    #[error("partition does not match the space (size {expected}, got {got})")]
    PartitionMismatch { expected: usize, got: usize },
    #[error("lambda = {lambda} is smaller than 2 * diam = {required}")]
    LambdaTooSmall { lambda: f64, required: f64 },
    #[error("no candidate superset has diameter <= d")]
    EmptyCandidateSet,
    #[error("unknown terminal label {0:?}")]
    UnknownLabel(String),
    #[error("invalid terminal set: {0}")]
    InvalidTerminals(String),
    #[error("linear program solver failed: {0}")]
    LpNumericalFailure(String),
    #[error("iteration count must be positive")]
    InvalidIterations,
    #[error("{what} requires at least {min} points, got {n}")]
    TooFewPoints { what: &'static str, n: usize, min: usize },

    #[error("{what}: size {n} exceeds limit {limit}")]
    SizeLimitExceeded { what: &'static str, n: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            DimensionMismatch(_)
            | DuplicateLabel(_)
            | NonFinite(..)
            | NonzeroDiagonal(_)
            | NotSymmetric(..)
            | NegativeOrZeroOffDiagonal(..)
            | TriangleViolation(..) => ErrorCategory::InvalidMetric,
            SizeLimitExceeded { .. } => ErrorCategory::SizeLimit,
            Parse(_) | Io(_) => ErrorCategory::Io,
            _ => ErrorCategory::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
