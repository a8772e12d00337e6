use thiserror::Error;

/// Error categories used across the workbench.
///
/// `Structural` covers malformed data (mismatched rings, inhomogeneous input,
/// broken group tables); `Domain` covers mathematically invalid requests
/// (division by zero denominators, non-regular data); `Refused` is the
/// explicit truncation refusal: the requested quantity is not certifiably
/// computable within the configured bounds, and we refuse rather than return
/// a silently wrong number.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
