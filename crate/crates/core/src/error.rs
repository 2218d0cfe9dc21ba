use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite objective value at index {index}")]
    NonFinite { index: usize },

    #[error("cone angle {0} outside [90, 180] degrees")]
    AngleOutOfRange(f64),

    #[error("constraint totals differ: {0} vs {1}")]
    ConstraintMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("golden-section search is not active")]
    SearchInactive,

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("genome does not match problem schema: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
