use thiserror::Error;

use crate::numerics::LogValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller broke a shape or calling contract.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A model violates the structural rules of its likelihood form.
    #[error("inconsistent model `{id}`: {reason}")]
    Structure { id: String, reason: String },

    #[error("evidence computed on different data ({left:016x} vs {right:016x})")]
    FingerprintMismatch { left: u64, right: u64 },

    /// Adaptive quadrature ran out of panels before meeting the tolerance.
    #[error(
        "quadrature did not converge after {panels} panels: \
         achieved relative error {achieved:.3e}, requested {requested:.3e}"
    )]
    Convergence {
        estimate: LogValue,
        achieved: f64,
        requested: f64,
        panels: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
