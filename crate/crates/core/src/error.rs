use thiserror::Error;

/// Errors raised by evaluations, zero searches and measure construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QError {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series for {what} did not converge within {max_terms} terms")]
    NonConvergence { what: String, max_terms: usize },

    #[error("lower parameter {param} hits a pole at term {index}")]
    PoleInLowerParameter { param: String, index: usize },

    #[error("could not certify a sign change in [{lo}, {hi}]: {reason}")]
    BracketFailure { lo: String, hi: String, reason: String },

    #[error("non-simple zero suspected near {x}")]
    NonSimpleZeroSuspected { x: String },

    #[error("insufficient zeros to decide interlacing: {0}")]
    InsufficientZeros(String),

    #[error("truncation too coarse: tail estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    TruncationTooCoarse { estimate: f64, tolerance: f64 },
}

impl QError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QError::Domain(msg.into())
    }

    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            QError::NonConvergence { .. }
                | QError::BracketFailure { .. }
                | QError::NonSimpleZeroSuspected { .. }
                | QError::InsufficientZeros(_)
                | QError::TruncationTooCoarse { .. }
        )
    }
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
