//! Coefficient functions `q(t)` and test weights `f`.

mod profile;
mod test_function;

pub use profile::{
    cos_integral, log_stack_threshold, CesaroLimit, CoefficientProfile, FamilyParams, FamilyTag,
    TailValue,
};
pub use test_function::{corollary3_test_function, unit_test_function, TestFunction};

/// `q(t) = α0/t² + α cos(βt)/t^γ`.
pub fn make_power_cosine(
    alpha0: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    t0: f64,
) -> crate::Result<CoefficientProfile> {
    CoefficientProfile::power_cosine(alpha0, alpha, beta, gamma, t0)
}

pub fn make_log_stack(
    epsilon: f64,
    alpha: f64,
    beta: f64,
    r: u32,
    t0: f64,
) -> crate::Result<CoefficientProfile> {
    CoefficientProfile::log_stack(epsilon, alpha, beta, r, t0)
}

pub fn make_mathieu(delta: f64, epsilon: f64, t0: f64) -> crate::Result<CoefficientProfile> {
    CoefficientProfile::mathieu(delta, epsilon, t0)
}

pub fn make_tabulated(samples: &[(f64, f64)]) -> crate::Result<CoefficientProfile> {
    CoefficientProfile::tabulated(samples)
}

pub fn make_constant(value: f64, t0: f64) -> crate::Result<CoefficientProfile> {
    CoefficientProfile::constant(value, t0)
}
