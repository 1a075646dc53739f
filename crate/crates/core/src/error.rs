use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Requested precision exceeds the configured maximum.
    #[error("precision limit exceeded: {requested} bits requested, maximum is {max}")]
    ResourceLimit { requested: u64, max: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// An interval comparison could not be separated before the precision cap.
    #[error("undecidable at {bits} bits: {what}")]
    Undecidable { what: String, bits: u64 },

    /// Input whose error bound swallows the quantity a formula divides by.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ResourceLimit { .. } => "resource_limit",
            Error::Domain(_) => "domain",
            Error::Undecidable { .. } => "undecidable",
            Error::Degenerate(_) => "degenerate",
            Error::CheckpointMismatch(_) => "checkpoint_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
