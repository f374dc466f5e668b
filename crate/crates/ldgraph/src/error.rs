use thiserror::Error;

/// Library-wide error type.
///
/// `Domain` covers arguments outside a documented range (bad radii,
/// out-of-range `z`, malformed graphs). `Resource` covers requests that
/// exceed an explicit budget rather than silently degrading.
/// `Format`/`Io` cover serialization and file problems. `Verification`
/// marks a failed acceptance criterion when running the verify suite.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("format: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: domain errors are 1, I/O and
    /// format errors are 2, verification failures are 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Resource(_) => 1,
            Error::Format(_) | Error::Io(_) => 2,
            Error::Verification(_) => 3,
        }
    }
}
