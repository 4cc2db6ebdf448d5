//! Crate-wide error type.

use crate::pretree::AxiomReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: graph files, automorphism files, unknown identifiers.
    #[error("input error: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A table failed pretree verification where a pretree was required.
    #[error("not a pretree:\n{0}")]
    NotPretree(AxiomReport),

    /// An internal consistency check failed. This indicates a bug in an
    /// oracle or construction, never a user error.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
