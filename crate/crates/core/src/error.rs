use thiserror::Error;

/// Errors raised by the exact and floating pipelines.
///
/// The variants split into two families that callers must keep apart:
/// input that violates a hypothesis of a formula ([`Error::is_invalid_input`])
/// and results that contradict an identity the formulas are known to
/// satisfy ([`Error::is_inconsistency`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order must be positive")]
    ZeroOrder,

    #[error("cyclotomic orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("value is not rational")]
    NotRational,

    #[error("parse error: {0}")]
    Parse(String),

    /// A query that does not satisfy the stated hypothesis.
    #[error("invalid input ({hypothesis}): {detail}")]
    Invalid {
        hypothesis: &'static str,
        detail: String,
    },

    /// Brute-force routines refuse inputs beyond their cost guard.
    #[error("cost guard exceeded: {0}")]
    CostGuard(String),

    #[error("floating precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// Two independent routes to the same quantity disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn invalid(hypothesis: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            hypothesis,
            detail: detail.into(),
        }
    }

    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Invalid { .. } | Error::ZeroOrder | Error::Parse(_) | Error::CostGuard(_)
        )
    }

    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            Error::Inconsistency(_) | Error::NotRational | Error::PrecisionExhausted(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
