use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A point lies outside the basis domain. `row` is set when the point
    /// came from a data matrix.
    #[error("point outside basis domain: dim {dim} value {value}{}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    Domain {
        dim: usize,
        value: f64,
        row: Option<usize>,
    },

    #[error("subset {0} not present in index set")]
    SubsetNotFound(String),

    #[error("position {position} out of range for index set of cardinality {len}")]
    IndexOutOfRange { position: usize, len: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("numeric failure at iteration {iter}: {msg}")]
    Numeric { iter: usize, msg: String },

    #[error("line search failed: {0}")]
    StepFailure(String),

    #[error("model format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
