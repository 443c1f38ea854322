use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inputs outside the operation's domain (sizes, ranges, guard rails).
    #[error("parameter error: {0}")]
    Param(String),
    /// Structurally malformed input, e.g. a partial coloring where a total one is required.
    #[error("validation error: {0}")]
    Validation(String),
    /// A postcondition that the mathematics guarantees did not hold.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
