use thiserror::Error;

/// Errors raised across the codec, simulator and analysis layers.
///
/// Variants are coarse on purpose: the command-line front end maps each one
/// onto a distinct exit status.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied inconsistent arguments (size mismatch, bad index, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Request is well formed but outside what the construction supports
    /// (odd qubit counts, for example).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Request would need more memory or time than the configured cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Numerical argument outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text or JSON input could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),

    /// Retrieval could not settle on a parity (no surviving states).
    #[error("unresolved: {0}")]
    Unresolved(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
