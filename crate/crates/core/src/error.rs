use thiserror::Error;

/// Errors raised by bound evaluation, root finding and the heat harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The normalized Laplacian ratio lies at or beyond `1 + π²/(ρ²t²)`.
    #[error("argument {x} violates the Laplacian-ratio bound x < 1 + pi^2/(rho^2 t^2) = {limit}")]
    Domain { x: f64, limit: f64 },

    /// The unified kernel argument is at or below the sine-branch pole `-π²`.
    #[error("kernel argument {w} is at or below -pi^2")]
    KernelDomain { w: f64 },

    /// The ρ→0 limit is handled by dedicated formulas, not by Φ_t.
    #[error("curvature rho must be non-zero here")]
    ZeroCurvature,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A hypothesis of a bound (time window, sign of ρ) is not met.
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    /// Legendre argument outside the range of Ψ'. For ρ ≤ 0 this means the
    /// Harnack inequality was asked to run backwards in time.
    #[error("argument {z} outside the range of the derivative of Psi ({reason})")]
    Range { z: f64, reason: &'static str },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

pub(crate) fn check_time(name: &str, t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a positive time, got {t}")))
    }
}
