use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid run parameters (bad level, unsupported prime, ...).
    #[error("config error: {0}")]
    Config(String),

    /// An operation was asked for outside its domain
    /// (e.g. the Teichmueller lift of a non-unit).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested p-adic precision cannot be reached.
    #[error("precision error: {0}")]
    Precision(String),

    /// An internal stabilization or consistency bound was exceeded.
    #[error("internal error: {0}")]
    Internal(String),

    /// Cache I/O failure, tagged with the offending key.
    #[error("cache error for key `{key}`: {source}")]
    Cache {
        key: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
