use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// A derived value does not fit the representable range.
    #[error("range error: {0}")]
    Range(String),
    /// Malformed or truncated serialized data.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed data that decodes to an invalid value.
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
