use crate::quad::QuadratureCertificate;
use thiserror::Error;

/// Crate-wide error type. Numerical routines never panic on bad input;
/// they report one of these instead.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid weights (alpha={alpha}, beta={beta}): both must be finite and >= 0 with alpha + beta > 0")]
    InvalidWeights { alpha: f64, beta: f64 },

    #[error("invalid kernel configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("invalid norm exponent p={p}: the Lp variant requires finite p > 1")]
    InvalidNorm { p: f64 },

    #[error("non-finite sample at t={t}")]
    NonFinite { t: f64 },

    #[error("integrator failed to converge within depth {depth}")]
    NoConvergence { depth: u32 },

    #[error("point t={t} lies outside the kernel domain [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },

    #[error("unknown catalog case `{id}`")]
    UnknownCase { id: String },

    #[error("unknown model `{id}`")]
    UnknownModel { id: String },

    #[error("enclosure coefficient alpha(b-x) - beta(x-a) = {value} is too close to zero")]
    SingularCoefficient { value: f64 },

    #[error("negative variance radicand {value} beyond the rounding allowance")]
    NegativeVariance { value: f64 },

    #[error("panel budget exhausted before reaching the target error (best bound {})", .best.error_bound)]
    BudgetExceeded { best: Box<QuadratureCertificate> },

    #[error("model validation failed for `{id}`: {reason}")]
    ModelValidation { id: String, reason: String },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
