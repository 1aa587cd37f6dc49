use thiserror::Error;

/// Errors raised by the physics modules and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// No stable equilibrium exists below contact; the bias is past pull-in.
    #[error("pull-in: no stable equilibrium in [0, {gap:e}) m at V_dc = {bias_voltage} V")]
    PullIn { bias_voltage: f64, gap: f64 },

    /// The membrane capacitance alone exceeds the capacitance needed for the target frequency.
    #[error(
        "tuning error: membrane capacitance {membrane:e} F exceeds required total {required:e} F"
    )]
    Tuning { membrane: f64, required: f64 },

    /// Invalid configuration or simulation setup.
    #[error("configuration error: {0}")]
    Config(String),

    /// Integrator step too coarse to resolve the fastest continuum mode.
    #[error("step size {dt:e} s exceeds the resolution bound {limit:e} s")]
    StepSize { dt: f64, limit: f64 },

    /// Fidelity threshold never reached within the allotted time.
    #[error("fidelity {threshold} not reached within {t_max:e} s (maximum {achieved})")]
    NotReached {
        threshold: f64,
        t_max: f64,
        achieved: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors that stem from a bad configuration rather than the physics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
