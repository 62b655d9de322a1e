use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("series not converged after {terms} terms (last term magnitude {last_term:.3e})")]
    Convergence { terms: usize, last_term: f64 },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-finite field value at step {step}")]
    NonFinite { step: usize },

    #[error("truncation contamination at t = {t}: tail amplitude {amplitude:.3e}")]
    Contamination { t: f64, amplitude: f64 },

    #[error("instantaneous frequency undefined at t = {t} (|psi| = {modulus:.3e})")]
    UndefinedFrequency { t: f64, modulus: f64 },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("integration horizon too short: tail bound {tail_bound:.3e} exceeds {tolerance:.3e}")]
    Horizon { tail_bound: f64, tolerance: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by bad user input rather than by the numerics.
    pub fn is_configuration(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Parse { .. } | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}
