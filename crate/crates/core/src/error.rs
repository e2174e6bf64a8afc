use std::io;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Wrong arity, repeated vertex, or out-of-range vertex.
    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    /// Bad percolation configuration, e.g. clique size not above the uniformity.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A generator parameter outside its supported range.
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    /// Inconsistent input data (duplicate edge, missing distinguished edge, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Text-format parse failure; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Key space overflow or memory budget exhausted.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
