use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed quantity violated an identity that must hold exactly in
    /// real arithmetic (for example a nonzero imaginary residue).
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    /// Malformed user input, such as an edge-list file.
    #[error("input error at line {line}: {message}")]
    Input { line: usize, message: String },

    /// The requested computation exceeds a fixed resource limit.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
