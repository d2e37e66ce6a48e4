use thiserror::Error;

/// Errors raised by every stage of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// A randomized or bounded search gave up. Says nothing about whether a
    /// solution exists.
    #[error("{stage}: not found within budget ({detail})")]
    NotFound { stage: &'static str, detail: String },

    /// The instance falls outside what the chosen field or method supports.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// A certificate failed its independent check.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn not_found(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::NotFound {
            stage,
            detail: detail.into(),
        }
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self, Error::NotFound { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
