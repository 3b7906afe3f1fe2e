use thiserror::Error;

/// Errors raised across the toolkit.
///
/// The variants mirror the failure classes the CLI maps to exit codes:
/// domain/contract/invariant failures are bugs or bad input (exit 1), while
/// `Refusal` means a brute-force budget was exceeded (exit 2).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the object's domain (e.g. an element outside
    /// the live ground set, mismatched ground sets).
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),
    /// An internal invariant failed. Indicates a bug in this crate.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// A brute-force routine refused to run because the input exceeds its budget.
    #[error("refused: {0}")]
    Refusal(String),
    /// Malformed input file or value.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
