use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure in dense {dim}x{dim} problem: {reason}")]
    NumericalFailure { dim: usize, reason: String },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no solitary wave at omega = {omega}: {reason}")]
    Existence { omega: f64, reason: String },

    #[error("profile integration failed at x = {x}: {reason}")]
    ProfileIntegration { x: f64, reason: String },

    #[error("domain too small: X(L)/X(0) = {tail_ratio:e} at half-width {half_width}")]
    DomainTooSmall { tail_ratio: f64, half_width: f64 },

    #[error("no real eigenvalue near {target}; nearest: {nearest:?}")]
    Detection {
        target: f64,
        nearest: Vec<Complex64>,
    },
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Config(msg.into()))
}
