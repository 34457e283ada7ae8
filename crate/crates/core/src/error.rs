use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Every variant maps onto one of three process exit codes, see
/// [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("Pfaffian requested on an odd index set of size {0}")]
    OddPfaffian(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("proportionality failure: {0}")]
    Proportionality(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code: 2 invalid input, 3 degenerate model, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::SingularCurve
            | Error::SingularMatrix
            | Error::OddPfaffian(_)
            | Error::InvalidInput(_) => 2,
            Error::DegenerateModel(_) | Error::Inconsistent(_) | Error::Proportionality(_) => 3,
            Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
