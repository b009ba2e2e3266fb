use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter is outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data cannot be processed (bad windows, missing picks, short records).
    #[error("data error: {0}")]
    Data(String),

    /// Malformed file contents.
    #[error("format error: {0}")]
    Format(String),

    /// Invalid configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A sampler failed its convergence diagnostics.
    #[error("diagnostic failure: {0}")]
    Diagnostic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
