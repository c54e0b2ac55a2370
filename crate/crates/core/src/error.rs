use thiserror::Error;

/// Failure while evaluating geometry at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("singular matrix (condition estimate {cond:.3e})")]
    SingularMatrix { cond: f64 },
    #[error("singular Jacobian (condition estimate {cond:.3e})")]
    SingularJacobian { cond: f64 },
    #[error("Newton iteration did not converge from any start (best residual {best:.3e})")]
    NoConvergence { best: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid sampling box: {0}")]
    InvalidBox(String),
    #[error("missing ingredient: {0}")]
    Missing(String),
}

impl EvalError {
    pub fn domain(msg: impl Into<String>) -> Self {
        EvalError::Domain(msg.into())
    }
}

pub type EvalResult<T> = Result<T, EvalError>;
