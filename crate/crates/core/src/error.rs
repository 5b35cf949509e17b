use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph with {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },

    #[error("graph has {num_vertices} vertices, exact {what} solver is capped at {cap}")]
    TooLarge {
        what: &'static str,
        num_vertices: usize,
        cap: usize,
    },

    #[error("unknown catalog graph `{0}`")]
    UnknownCatalog(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wrong observability class: {0}")]
    WrongClass(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
