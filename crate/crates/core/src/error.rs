use thiserror::Error;

/// Errors raised by the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("radius must be at least 1, got {0}")]
    Radius(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The strength parameter is undefined on graphs with an isolated edge.
    #[error("problem undefined: graph has an isolated edge {0}-{1}")]
    IsolatedEdge(usize, usize),

    #[error("graph is not regular (degrees range from {min} to {max})")]
    NotRegular { min: usize, max: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid colouring: {0}")]
    Colouring(String),

    /// A structural precondition of a construction step does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
