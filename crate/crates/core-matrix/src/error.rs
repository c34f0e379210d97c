use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix dimension must be positive")]
    ZeroDimension,
    #[error("entry bound {0} is not a nonnegative finite number")]
    InvalidBound(f64),
    #[error("triangle length {got} does not match n(n+1)/2 = {expected}")]
    TriangleLength { expected: usize, got: usize },
    #[error("entry {entry} exceeds declared bound {bound}")]
    BoundViolation { entry: f64, bound: f64 },
    #[error("non-finite entry")]
    NonFinite,
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate index in index set")]
    DuplicateIndex,
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
