use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsdError {
    #[error("matrix is not Hermitian (‖H − H†‖_F = {residual:e})")]
    NonHermitian { residual: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("NotPSD: eigenvalue {min_eigenvalue:e} is below tolerance")]
    NotPsd { min_eigenvalue: f64 },

    #[error("epsilon {0} is outside [0, 1]")]
    InvalidEpsilon(f64),

    #[error("EpsilonTooLarge: (r−1)·T·ε = {product} must be < 1/2 (r = {r}, T = {t}, ε = {eps})")]
    EpsilonTooLarge { eps: f64, r: usize, t: usize, product: f64 },

    #[error("DeltaTooLarge: δ = {delta} must be < 1/(2(r−1)) for r = {r}")]
    DeltaTooLarge { delta: f64, r: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("NotCommuting: off-diagonal mass {offdiag:e} in state {index}")]
    NotCommuting { index: usize, offdiag: f64 },

    #[error("need at least {min} hypotheses, got {found}")]
    TooFewStates { min: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation failed ({invariant}): {message}")]
    Validation { invariant: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl QsdError {
    pub(crate) fn validation(invariant: &str, message: impl Into<String>) -> Self {
        QsdError::Validation { invariant: invariant.to_string(), message: message.into() }
    }

    /// True for errors caused by bad input rather than numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, QsdError::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, QsdError>;
