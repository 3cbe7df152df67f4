use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum FltoError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: batch of {got} failures, oracle built for dstar={dstar}")]
    Capacity { got: usize, dstar: usize },
    #[error("snapshot format error: {0}")]
    Snapshot(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FltoError>;
