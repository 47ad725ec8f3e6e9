use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Two series built over different ring configurations were combined.
    #[error("configuration mismatch: {0}")]
    Config(String),
    /// An operation was called outside its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The arrangement is not general enough for the requested computation.
    #[error("arrangement not general: {0}")]
    Generality(String),
    /// Arrangement sampling exhausted its retry budget.
    #[error("arrangement generation failed: {0}")]
    Generation(String),
    /// A key is malformed or does not fit the configured bounds.
    #[error("invalid key: {0}")]
    Key(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
