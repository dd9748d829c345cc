//! Crate-wide error type, mapped onto CLI exit codes by the binary.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or rejected input (exit code 2).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A stated precondition does not hold for the given data (exit code 2).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An enumeration would exceed the configured budget (exit code 3).
    #[error("budget exceeded: {what} needs {needed} items, budget is {budget}")]
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },

    /// A mathematical identity the code relies on failed to verify (exit code 4).
    #[error("identity violation: {0}")]
    Identity(String),

    /// Operands belong to different groups or have mismatched shapes (exit code 2).
    #[error("shape mismatch: {0}")]
    Mismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidInput(_) | Error::Precondition(_) | Error::Mismatch(_) => 2,
            Error::Budget { .. } => 3,
            Error::Identity(_) => 4,
            Error::Io(_) | Error::Json(_) => 2,
        }
    }
}
