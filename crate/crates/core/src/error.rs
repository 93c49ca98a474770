use thiserror::Error;

/// Errors raised by parsing, argument validation and the exhaustive search guards.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance has {size} vertices, exceeding the exhaustive-search guard of {guard}")]
    GuardExceeded { size: usize, guard: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
