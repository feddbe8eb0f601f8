use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must share a ground set do not.
    #[error("structural error: {0}")]
    Structural(String),
    /// An operation was called on input violating its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Numeric parameters outside their legal range.
    #[error("invalid parameters: {0}")]
    Parameter(String),
    /// Malformed `.fam` text.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
