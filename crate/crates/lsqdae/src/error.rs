use std::path::PathBuf;

/// Errors of the experiment driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Error from the numerical kernels.
    #[error(transparent)]
    Core(#[from] lsqdae_core::Error),
    /// A run specification is inconsistent or incomplete.
    #[error("invalid run specification: {0}")]
    Spec(String),
    /// A problem file could not be read or parsed.
    #[error("problem file {path}: {msg}")]
    ProblemFile {
        /// File that failed.
        path: PathBuf,
        /// What went wrong.
        msg: String,
    },
    /// I/O failure while writing results.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// CSV serialization failure.
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// JSON serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn spec_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Spec(msg.into()))
}
