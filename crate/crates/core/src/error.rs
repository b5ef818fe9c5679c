use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("t0 = {t0} is outside the domain; the smallest admissible start exceeds {min_t0}")]
    Domain { t0: f64, min_t0: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("evaluation at t = {t} is outside the tabulated range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("non-finite integrand value at t = {t}")]
    NonFinite { t: f64 },

    #[error("step size underflow at t = {t} (problem is too stiff for the explicit integrator)")]
    Stiffness { t: f64 },

    #[error("step budget of {steps} exhausted at t = {t}")]
    StepBudget { t: f64, steps: usize },

    #[error(
        "solution escaped upward (y = {y:e}) at t = {t}; Riccati flows can only blow up downward"
    )]
    UpperEscape { t: f64, y: f64 },

    #[error("no blow-up bracket found: every initial value in [{low}, {high}] survives")]
    BracketNotFound { low: f64, high: f64 },

    #[error("minimum of F not bracketed: {0}")]
    MinimumNotBracketed(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
