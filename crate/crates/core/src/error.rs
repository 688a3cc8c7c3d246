use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate dataset: all points are identical, no clustering signal")]
    DegenerateDataset,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("instance too large for {solver}: {variables} variables exceeds the limit of {limit}")]
    TooLarge {
        solver: &'static str,
        variables: usize,
        limit: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn dataset(msg: impl Into<String>) -> Self {
        Error::InvalidDataset(msg.into())
    }
}
