use thiserror::Error;

/// Failure categories shared by every module.
///
/// `Validation` covers bad user input (out-of-domain parameters, states of the
/// wrong kind). `Invariant` means an internal consistency check failed, which
/// indicates a bug or a transcription error rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("degenerate sample: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
