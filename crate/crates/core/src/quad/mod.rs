//! Quadrature, cumulative tables and finite-horizon limit estimation.

mod asymptotic;
mod gauss_kronrod;
mod improper;
mod table;

pub use asymptotic::{
    estimate_asymptotic, estimate_from_samples, window_bounds, AsymptoticEstimate, LimitKind,
    Trend, WindowOptions, WindowStat,
};
pub use gauss_kronrod::{
    integrate, integrate_fn, integrate_split, integrate_vec, CompensatedSum, QuadResult,
};
pub use improper::{
    improper_exp_integral, improper_exp_integral_with, Convergence, ImproperIntegral,
    ImproperOptions, EXP_SATURATION,
};
pub use table::{
    cumulative_series, default_step, make_grid, weighted_average, CumulativeTable, HermiteSeries,
    NestedCumulative, DEFAULT_STEP,
};

use crate::coeff::CoefficientProfile;
use crate::Result;

/// Builds the cumulative table of `profile` on `[t0, t_end]`.
pub fn cumulative(profile: &CoefficientProfile, t_end: f64, tol: f64) -> Result<CumulativeTable> {
    CumulativeTable::build(profile, t_end, tol)
}
