use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    classical, integral, Auxiliary, ClassicalCriterion, Condition4, CriterionVerdict,
    ProfileAnalysis,
};
use crate::coeff::{corollary3_test_function, unit_test_function, FamilyParams, TestFunction};
use crate::error::{Error, Result};
use crate::mathieu;

/// The test function `f` of the weighted criteria.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    #[default]
    Unit,
    PeriodicCap {
        mu0: f64,
    },
    /// Periodic cap at the minimiser `μ*(ε)` of a Mathieu profile.
    OptimalCap,
}

impl WeightSpec {
    pub fn build(&self, params: &FamilyParams) -> Result<TestFunction> {
        match *self {
            WeightSpec::Unit => Ok(unit_test_function()),
            WeightSpec::PeriodicCap { mu0 } => corollary3_test_function(mu0),
            WeightSpec::OptimalCap => match params {
                &FamilyParams::Mathieu { epsilon, .. } => {
                    corollary3_test_function(mathieu::minimize(epsilon, 1e-10)?.mu_star)
                }
                _ => Err(Error::InvalidInput(
                    "optimal_cap needs a Mathieu profile".into(),
                )),
            },
        }
    }
}

fn one() -> f64 {
    1.0
}

fn corollary3_tol() -> f64 {
    1e-9
}

/// One requested criterion with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", deny_unknown_fields)]
pub enum CriterionRequest {
    Deng {
        alpha0: f64,
    },
    /// Evaluates both branches.
    Kong {
        lambda_exp: f64,
        #[serde(default)]
        r_samples: Vec<f64>,
    },
    /// `lambda` defaults to the Cesàro limit of a marginal profile.
    Theorem3 {
        #[serde(default)]
        f: WeightSpec,
        #[serde(default)]
        lambda: Option<f64>,
        #[serde(default = "one")]
        alpha: f64,
        #[serde(default)]
        condition4: Condition4,
    },
    Corollary1 {
        q0: Auxiliary,
        q1: Auxiliary,
    },
    Theorem4 {
        lambda: f64,
        epsilon: f64,
        #[serde(default = "one")]
        alpha: f64,
    },
    Corollary2 {
        lambda: f64,
        epsilon: f64,
    },
    Theorem5 {
        #[serde(default)]
        f: WeightSpec,
    },
    Corollary3 {
        #[serde(default = "corollary3_tol")]
        tol: f64,
    },
    Hartman,
    Kamenev {
        n: u32,
    },
    Sturm {
        #[serde(default)]
        q0: Option<f64>,
    },
}

impl ProfileAnalysis {
    /// Evaluates one request; Kong yields two verdicts.
    pub fn check(&self, req: &CriterionRequest) -> Result<Vec<CriterionVerdict>> {
        use CriterionRequest as R;
        let one = |v: Result<CriterionVerdict>| v.map(|v| vec![v]);
        match req {
            R::Deng { alpha0 } => one(classical::deng_with(self, *alpha0)),
            R::Kong {
                lambda_exp,
                r_samples,
            } => Ok(classical::kong_with(self, *lambda_exp, r_samples)?.into_vec()),
            R::Theorem3 {
                f,
                lambda,
                alpha,
                condition4,
            } => {
                let lambda = match lambda {
                    Some(v) => *v,
                    None => self.classification()?.lambda.ok_or_else(|| {
                        Error::InvalidInput(
                            "Theorem3 needs lambda unless the profile is marginal".into(),
                        )
                    })?,
                };
                let f = f.build(&self.profile().params())?;
                one(integral::theorem3_with(
                    self,
                    &f,
                    lambda,
                    *alpha,
                    *condition4,
                ))
            }
            R::Corollary1 { q0, q1 } => one(integral::corollary1_with(self, q0, q1)),
            R::Theorem4 {
                lambda,
                epsilon,
                alpha,
            } => one(integral::theorem4_with(self, *lambda, *epsilon, *alpha)),
            R::Corollary2 { lambda, epsilon } => {
                one(integral::corollary2_with(self, *lambda, *epsilon))
            }
            R::Theorem5 { f } => {
                let f = f.build(&self.profile().params())?;
                one(integral::theorem5_with(self, &f))
            }
            R::Corollary3 { tol } => one(integral::check_corollary3(
                self.profile(),
                *tol,
                self.horizon(),
            )),
            R::Hartman => one(classical::classical_with(self, ClassicalCriterion::Hartman)),
            R::Kamenev { n } => one(classical::classical_with(
                self,
                ClassicalCriterion::Kamenev { n: *n },
            )),
            R::Sturm { q0 } => one(classical::classical_with(
                self,
                ClassicalCriterion::Sturm { q0: *q0 },
            )),
        }
    }
}

/// Evaluates every request concurrently; verdicts keep the request order.
pub fn run_suite(
    analysis: &ProfileAnalysis,
    requests: &[CriterionRequest],
) -> Result<Vec<CriterionVerdict>> {
    // Shared tables are built once up front rather than raced for.
    analysis.table()?;
    let parts: Vec<Vec<CriterionVerdict>> = requests
        .par_iter()
        .map(|r| analysis.check(r))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}
