//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates the operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Array shapes or grids of the operands do not match.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An iterative method failed (e.g. a diverging solve).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A file did not parse as the expected format.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}
