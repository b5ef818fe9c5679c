//! Finite-horizon evaluation of integral oscillation criteria.
//!
//! Every check returns a [`CriterionVerdict`] with one margin per
//! sub-condition. Asymptotic conditions are judged on the window
//! `[horizon/2, horizon]`; a failure is only reported together with a
//! witnessing window or time.

mod classical;
mod classify;
mod integral;
mod request;
mod verdict;

use std::sync::OnceLock;

pub use classical::{
    check_classical, check_deng, check_kong, check_sturm, ClassicalCriterion, KongVerdicts,
};
pub use classify::{classify, CaseClassification, CaseLabel};
pub use integral::{
    check_corollary1, check_corollary2, check_corollary3, check_theorem3, check_theorem3_with,
    check_theorem4, check_theorem5, Auxiliary, Condition4,
};
pub use request::{run_suite, CriterionRequest, WeightSpec};
pub use verdict::{CriterionId, CriterionVerdict, Param, VerdictStatus, Witness};

use crate::coeff::CoefficientProfile;
use crate::error::{Error, Result};
use crate::quad::{window_bounds, CumulativeTable, WindowOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    /// Absolute quadrature tolerance per unit length.
    pub tol: f64,
    pub windows: usize,
    /// Samples per window for cheap (tabulated) functionals.
    pub samples_per_window: usize,
    /// Samples per window for functionals needing a quadrature per sample.
    pub functional_samples: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            windows: 8,
            samples_per_window: 1024,
            functional_samples: 24,
        }
    }
}

impl Settings {
    pub fn window_options(&self) -> WindowOptions {
        WindowOptions {
            windows: self.windows,
            samples_per_window: self.samples_per_window,
        }
    }
}

/// Shared, lazily built data for evaluating several criteria on one profile.
pub struct ProfileAnalysis {
    profile: CoefficientProfile,
    horizon: f64,
    settings: Settings,
    table: OnceLock<Result<CumulativeTable>>,
    classification: OnceLock<Result<CaseClassification>>,
}

impl ProfileAnalysis {
    pub fn new(profile: &CoefficientProfile, horizon: f64) -> Result<Self> {
        Self::with_settings(profile, horizon, Settings::default())
    }

    pub fn with_settings(
        profile: &CoefficientProfile,
        horizon: f64,
        settings: Settings,
    ) -> Result<Self> {
        if !(horizon > profile.t0()) {
            return Err(Error::InvalidInput(format!(
                "horizon {horizon} must exceed t0 = {}",
                profile.t0()
            )));
        }
        if horizon > profile.domain_end() {
            return Err(Error::OutOfRange {
                t: horizon,
                lo: profile.t0(),
                hi: profile.domain_end(),
            });
        }
        if settings.windows < 3 {
            return Err(Error::param("windows", "need at least 3"));
        }
        if !(settings.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        Ok(Self {
            profile: profile.clone(),
            horizon,
            settings,
            table: OnceLock::new(),
            classification: OnceLock::new(),
        })
    }

    pub fn profile(&self) -> &CoefficientProfile {
        &self.profile
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn t0(&self) -> f64 {
        self.profile.t0()
    }

    /// `Q1`, `Q2` on `[t0, horizon]`.
    pub fn table(&self) -> Result<&CumulativeTable> {
        self.table
            .get_or_init(|| CumulativeTable::build(&self.profile, self.horizon, self.settings.tol))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn classification(&self) -> Result<&CaseClassification> {
        self.classification
            .get_or_init(|| classify::classify_with(self))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub(crate) fn windows(&self) -> Result<Vec<f64>> {
        window_bounds(self.t0(), self.horizon, self.settings.windows)
    }

    /// `functional_samples` points per window, window ends included.
    pub(crate) fn functional_grid(&self) -> Result<Vec<f64>> {
        let bounds = self.windows()?;
        let m = self.settings.functional_samples.max(4);
        let mut ts = Vec::with_capacity(bounds.len() * m);
        for w in bounds.windows(2) {
            for i in 0..m {
                ts.push(w[0] + (w[1] - w[0]) * i as f64 / m as f64);
            }
        }
        ts.push(self.horizon);
        Ok(ts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analysis_validates_horizon() {
        let p = CoefficientProfile::constant(1.0, 2.0).unwrap();
        assert!(ProfileAnalysis::new(&p, 1.0).is_err());
        let a = ProfileAnalysis::new(&p, 100.0).unwrap();
        let g = a.functional_grid().unwrap();
        assert_eq!(g.len(), 8 * 24 + 1);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(g[0], 51.0);
    }
}
