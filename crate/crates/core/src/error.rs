use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no simple root system of type {series}{rank}")]
    Classification { series: String, rank: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("lambda must be a proper subset of the simple roots: {0}")]
    NotParabolic(String),

    #[error("degenerate restriction: {0}")]
    DegenerateRestriction(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An admissible operation whose precondition failed. `clause` names the
    /// failed clause and is stable across releases.
    #[error("rejected operation: {clause} ({detail})")]
    RejectedOp {
        clause: &'static str,
        detail: String,
    },

    #[error("malformed document: {0}")]
    Schema(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn rejected(clause: &'static str, detail: impl Into<String>) -> Self {
        Error::RejectedOp {
            clause,
            detail: detail.into(),
        }
    }

    /// The failed clause for a rejected operation.
    pub fn clause(&self) -> Option<&'static str> {
        match self {
            Error::RejectedOp { clause, .. } => Some(clause),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
