use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid rational `{0}`")]
    BadRational(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported size: {0}")]
    ResourceBound(String),

    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("target is not closed under colour permutations: {0}")]
    TargetNotOrbitClosed(String),

    #[error("rounding failed: {0}")]
    RoundingFailed(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
