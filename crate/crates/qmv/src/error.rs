use thiserror::Error;

/// Errors shared by all modules of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("linear system: {0}")]
    LinearSystem(String),

    #[error("simplex: {0}")]
    Simplex(String),

    #[error("rationalization failed: {0}")]
    Rationalize(String),

    #[error("not a valid state: {0}")]
    InvalidState(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
