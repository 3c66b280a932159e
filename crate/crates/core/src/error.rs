//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("validation error: {0}")]
    Validation(String),
    /// An enumeration hit its configured cap.
    #[error("cap exceeded: {what} exceeded {cap}")]
    CapExceeded { what: String, cap: usize },
    /// The operation requires a simplicial arrangement.
    #[error("arrangement is not simplicial: {0}")]
    NotSimplicial(String),
    /// A face, flat or path is not of the required kind.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(msg()))
    }
}
