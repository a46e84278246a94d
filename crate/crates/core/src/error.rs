use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands live on incompatible composite spaces.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The Fock truncation cannot hold the requested coherent amplitude.
    #[error(
        "truncation N = {truncation} too small for amplitude {amplitude}: \
         tail weight {tail:e} exceeds tolerance {tolerance:e}"
    )]
    Truncation {
        amplitude: f64,
        truncation: usize,
        tail: f64,
        tolerance: f64,
    },

    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A matrix or vector fails the state invariants (norm, trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invalid_state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }

    /// True for failures that come from numerical limits rather than bad input
    /// (truncation too small, unmet numerical preconditions, broken invariants).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. } | Error::Precondition(_) | Error::InvalidState(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
