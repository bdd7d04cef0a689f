use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Geometric degeneracy (zero-length segment, coincident surfaces, ...).
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// Parameter outside the domain D.
    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
    /// A stated hypothesis fails on the probe set, or makes the bound vacuous.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
