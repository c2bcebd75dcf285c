use thiserror::Error;

/// Errors raised by the q-Gaussian routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QGaussError {
    #[error("invalid q = {0}: must lie in [-1, 1]")]
    InvalidQ(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series does not converge: {0}")]
    NonConvergent(String),

    #[error("{needed} series terms needed for q = {q}, eps = {eps:e}, but the cap is {max_terms}{hint}")]
    TermBudgetExceeded {
        q: f64,
        eps: f64,
        needed: usize,
        max_terms: usize,
        hint: &'static str,
    },

    #[error("operation not defined for the {0} law")]
    UnsupportedKind(&'static str),

    #[error("sampling method {method} cannot be used for q = {q}")]
    MethodMismatch { method: &'static str, q: f64 },
}

impl QGaussError {
    /// Short machine-readable tag, used in JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            QGaussError::InvalidQ(_) => "InvalidQ",
            QGaussError::InvalidArgument(_) => "InvalidArgument",
            QGaussError::NonConvergent(_) => "NonConvergent",
            QGaussError::TermBudgetExceeded { .. } => "TermBudgetExceeded",
            QGaussError::UnsupportedKind(_) => "UnsupportedKind",
            QGaussError::MethodMismatch { .. } => "MethodMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, QGaussError>;
