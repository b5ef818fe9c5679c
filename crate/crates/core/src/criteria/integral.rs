//! Criteria built on the shifted Riccati equation: conditions on
//! `exp{-4λt + 4Q2}`, weighted averages of `q`, and test functions `f`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classical::scan_windows;
use super::classify::CaseLabel;
use super::verdict::{converges, diverges, liminf_below, limsup_above, Builder, Condition};
use super::{CriterionId, CriterionVerdict, ProfileAnalysis, Witness};
use crate::coeff::{CoefficientProfile, FamilyParams, TestFunction};
use crate::error::{Error, Result};
use crate::mathieu;
use crate::quad::{
    cumulative_series, default_step, estimate_asymptotic, estimate_from_samples,
    improper_exp_integral, make_grid, weighted_average, AsymptoticEstimate, HermiteSeries,
    ImproperIntegral, LimitKind, NestedCumulative, Trend,
};

/// Substitute for the weighted-average condition of Theorem 3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition4 {
    /// `limsup t^{-α} ∫ (t-τ)^α q ≥ λ`.
    #[default]
    Limsup,
    /// `∫ (λ - Q1)² < ∞`.
    SquareIntegral,
    /// `|{t : Q1(t) ≥ λ}| = ∞`.
    LevelSet,
}

/// Auxiliary functions of Corollary 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Auxiliary {
    /// `scale · t^exponent`.
    Power {
        scale: f64,
        exponent: f64,
    },
    /// `scale · t^{e0} (ln t)^{e1} (ln ln t)^{e2} ⋯`; needs `ln_k t > 0`.
    IteratedLog {
        scale: f64,
        exponents: Vec<f64>,
    },
    Constant {
        value: f64,
    },
}

impl Auxiliary {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            &Auxiliary::Power { scale, exponent } => scale * t.powf(exponent),
            Auxiliary::IteratedLog { scale, exponents } => {
                let mut v = *scale;
                let mut l = t;
                for (k, e) in exponents.iter().enumerate() {
                    if k > 0 {
                        l = l.ln();
                    }
                    v *= l.powf(*e);
                }
                v
            }
            &Auxiliary::Constant { value } => value,
        }
    }

    /// Exponents over `t, ln t, ln ln t, …` and the scale.
    fn shape(&self) -> (f64, Vec<f64>) {
        match self {
            &Auxiliary::Power { scale, exponent } => (scale, vec![exponent]),
            Auxiliary::IteratedLog { scale, exponents } => (*scale, exponents.clone()),
            &Auxiliary::Constant { value } => (value, vec![]),
        }
    }

    /// Whether `∫^∞ dt / Q0` converges, by the iterated-logarithm scale:
    /// the first exponent different from 1 decides, all ones diverge.
    /// Returns that exponent minus 1 (0 when every exponent is 1).
    pub fn reciprocal_integrability(&self) -> f64 {
        let (_, e) = self.shape();
        e.iter().map(|x| x - 1.0).find(|d| *d != 0.0).unwrap_or(0.0)
    }

    /// Whether `sup Q1 < ∞`: the leading nonzero exponent decides.
    pub fn bounded_above(&self) -> bool {
        let (scale, e) = self.shape();
        scale <= 0.0 || e.iter().find(|x| **x != 0.0).is_none_or(|x| *x < 0.0)
    }

    pub fn describe(&self) -> String {
        match self {
            Auxiliary::Power { scale, exponent } => format!("{scale}*t^{exponent}"),
            Auxiliary::IteratedLog { scale, exponents } => {
                let mut s = format!("{scale}");
                for (k, e) in exponents.iter().enumerate() {
                    let base = match k {
                        0 => "t".to_string(),
                        1 => "ln t".to_string(),
                        _ => format!("ln_{k} t"),
                    };
                    s.push_str(&format!("*({base})^{e}"));
                }
                s
            }
            Auxiliary::Constant { value } => format!("{value}"),
        }
    }
}

/// `t^{-α} ∫_{t0}^t (t-τ)^α q`; tabulated for `α = 1`, sampled otherwise.
fn weighted_estimate(
    a: &ProfileAnalysis,
    alpha: f64,
    kind: LimitKind,
) -> Result<AsymptoticEstimate> {
    if !(alpha >= 1.0) {
        return Err(Error::param(
            "alpha",
            format!("must be at least 1, got {alpha}"),
        ));
    }
    let (t0, h) = (a.t0(), a.horizon());
    let mut e = if alpha == 1.0 {
        let q2 = a.table()?.q2_series();
        estimate_asymptotic(
            |t| q2.eval(t) / t,
            kind,
            t0,
            h,
            a.settings().window_options(),
        )?
    } else {
        let grid = a.functional_grid()?;
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&t| weighted_average(a.profile(), alpha, t, a.settings().tol))
            .collect::<Result<_>>()?;
        estimate_from_samples(&grid, &vals, kind, t0, h, a.settings().windows)?
    };
    // A convergent Q1 forces every weighted average to its limit; the
    // windowed samples still carry an O(ln t / t) bias, so prefer the tail.
    if let Some((lambda, res)) = super::classify::tail_lambda(a)? {
        e.value = lambda;
        e.trend = Trend::Converged;
        e.tolerance = res;
    }
    Ok(e)
}

/// `∫ exp{-4λ(t - t0) + 4Q2}` on `[t0, horizon]`.
fn shifted_exponential(a: &ProfileAnalysis, lambda: f64) -> Result<ImproperIntegral> {
    let t0 = a.t0();
    let q2 = a.table()?.q2_series();
    improper_exp_integral(
        |t| -4.0 * lambda * (t - t0) + 4.0 * q2.eval(t),
        t0,
        a.horizon(),
    )
}

/// The nested integrals attached to a test function `f`:
/// `G = ∫ [2fq - f'²/(2f)]`, `E = ∫ G/f` and `Q1` on a common grid.
struct TestFunctionData {
    grid: Vec<f64>,
    g: Vec<f64>,
    e: HermiteSeries,
    q1: HermiteSeries,
}

fn test_function_data(a: &ProfileAnalysis, f: &TestFunction) -> Result<TestFunctionData> {
    let (t0, h) = (a.t0(), a.horizon());
    f.check_positive(t0, h, 100_000)?;
    let profile = a.profile();
    let mut breaks = profile.breakpoints(t0, h);
    breaks.extend(f.kink_points(t0, h));
    breaks.sort_by(|x, y| x.total_cmp(y));
    let grid = make_grid(t0, h, default_step(h - t0), &breaks);
    let tol = a.settings().tol;
    let integrand = |s: f64| -> Result<f64> {
        let fv = f.eval_f(s);
        let df = f.eval_df(s);
        Ok(2.0 * fv * profile.eval(s)? - df * df / (2.0 * fv))
    };
    let nested = NestedCumulative::build(grid.clone(), integrand, |s| Ok(1.0 / f.eval_f(s)), tol)?;
    let q1 = cumulative_series(|s| profile.eval(s), grid.clone(), tol)?;
    Ok(TestFunctionData {
        e: nested.outer_series(),
        g: nested.inner,
        grid,
        q1,
    })
}

/// Condition 1: `∫ exp{∫ (1/f) ∫ [2fq - f'²/(2f)]} = +∞`.
fn condition1(
    a: &ProfileAnalysis,
    f: &TestFunction,
    data: Option<&TestFunctionData>,
) -> Result<Condition> {
    let t0 = a.t0();
    let r = match data {
        Some(d) => improper_exp_integral(|t| d.e.eval(t), t0, a.horizon())?,
        None => {
            debug_assert!(f.is_unit());
            let q2 = a.table()?.q2_series();
            improper_exp_integral(|t| 2.0 * q2.eval(t), t0, a.horizon())?
        }
    };
    Ok(diverges("1", &r))
}

/// `K(t) = G(t)/f(t) - 2 Q1(t)` sampled on the window region.
fn k_estimate(
    a: &ProfileAnalysis,
    f: &TestFunction,
    d: &TestFunctionData,
) -> Result<AsymptoticEstimate> {
    let start = a.windows()?[0];
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (i, &t) in d.grid.iter().enumerate() {
        if t >= start {
            ts.push(t);
            vs.push(d.g[i] / f.eval_f(t) - 2.0 * d.q1.values()[i]);
        }
    }
    estimate_from_samples(
        &ts,
        &vs,
        LimitKind::LimInf,
        a.t0(),
        a.horizon(),
        a.settings().windows,
    )
}

pub fn check_theorem3(
    profile: &CoefficientProfile,
    f: &TestFunction,
    lambda: f64,
    alpha: f64,
    horizon: f64,
) -> Result<CriterionVerdict> {
    check_theorem3_with(profile, f, lambda, alpha, Condition4::Limsup, horizon)
}

pub fn check_theorem3_with(
    profile: &CoefficientProfile,
    f: &TestFunction,
    lambda: f64,
    alpha: f64,
    cond4: Condition4,
    horizon: f64,
) -> Result<CriterionVerdict> {
    theorem3_with(
        &ProfileAnalysis::new(profile, horizon)?,
        f,
        lambda,
        alpha,
        cond4,
    )
}

pub(crate) fn theorem3_with(
    a: &ProfileAnalysis,
    f: &TestFunction,
    lambda: f64,
    alpha: f64,
    cond4: Condition4,
) -> Result<CriterionVerdict> {
    if !(alpha >= 1.0) {
        return Err(Error::param(
            "alpha",
            format!("must be at least 1, got {alpha}"),
        ));
    }
    let mut b = Builder::new(CriterionId::Theorem3, a.horizon());
    b.param("f", f.describe())
        .param("lambda", lambda)
        .param("alpha", alpha);
    b.param("condition4", format!("{cond4:?}"));

    let data = if f.is_unit() {
        None
    } else {
        Some(test_function_data(a, f)?)
    };
    b.condition("1", condition1(a, f, data.as_ref())?);

    match &data {
        None => {
            b.condition(
                "2",
                Condition::strict(f64::INFINITY, 0.0, || None).noted("holds for f ≡ 1"),
            );
        }
        Some(d) => {
            let k = k_estimate(a, f, d)?;
            let pass = match k.trend {
                Trend::DivergesUp => Some(false),
                Trend::Undetermined => None,
                _ => Some(true),
            };
            let span = k.windows.last().map(|w| (w.start, w.end));
            b.condition(
                "2",
                Condition::indicator(pass, || {
                    Some(Witness {
                        condition: "2".into(),
                        span,
                        detail: "window minima of the functional grow without bound".into(),
                    })
                }),
            );
        }
    }

    b.condition("3", converges("3", &shifted_exponential(a, lambda)?));

    match cond4 {
        Condition4::Limsup => {
            let e = weighted_estimate(a, alpha, LimitKind::LimSup)?;
            b.condition("4", limsup_above("4", &e, lambda, false));
        }
        Condition4::SquareIntegral => {
            let q1 = a.table()?.q1_series();
            let r = improper_exp_integral(
                |t| 2.0 * (lambda - q1.eval(t)).abs().ln(),
                a.t0(),
                a.horizon(),
            )?;
            b.condition("4", converges("4", &r));
        }
        Condition4::LevelSet => {
            let t = a.table()?;
            let vals: Vec<f64> = t.q1().iter().map(|v| v - lambda).collect();
            b.condition(
                "4",
                level_set_growth("4", t.grid(), &vals, a.t0(), a.horizon()),
            );
        }
    }
    Ok(b.finish())
}

/// Measure of `{v ≥ 0}` on each of the last four doublings of `[t0, horizon]`.
fn level_set_growth(label: &str, grid: &[f64], v: &[f64], t0: f64, h: f64) -> Condition {
    let mut worst = f64::INFINITY;
    let mut stall = None;
    for k in 0..4 {
        let hi = t0 + (h - t0) / 2f64.powi(k);
        let lo = t0 + (h - t0) / 2f64.powi(k + 1);
        let mut measure = 0.0;
        for i in 0..grid.len() - 1 {
            let (a, b) = (grid[i].max(lo), grid[i + 1].min(hi));
            if b <= a {
                continue;
            }
            let (va, vb) = (v[i], v[i + 1]);
            let frac = if va >= 0.0 && vb >= 0.0 {
                1.0
            } else if va < 0.0 && vb < 0.0 {
                0.0
            } else if va >= 0.0 {
                va / (va - vb)
            } else {
                vb / (vb - va)
            };
            measure += frac * (b - a);
        }
        let share = measure / (hi - lo);
        if share < worst {
            worst = share;
        }
        if share == 0.0 && stall.is_none() {
            stall = Some((lo, hi));
        }
    }
    Condition::strict(worst, 0.0, || {
        stall.map(|span| Witness {
            condition: label.to_string(),
            span: Some(span),
            detail: "the level set has zero measure in this doubling interval".into(),
        })
    })
}

pub fn check_corollary1(
    profile: &CoefficientProfile,
    q0: &Auxiliary,
    q1fn: &Auxiliary,
    horizon: f64,
) -> Result<CriterionVerdict> {
    corollary1_with(&ProfileAnalysis::new(profile, horizon)?, q0, q1fn)
}

pub(crate) fn corollary1_with(
    a: &ProfileAnalysis,
    q0: &Auxiliary,
    q1fn: &Auxiliary,
) -> Result<CriterionVerdict> {
    let (t0, h) = (a.t0(), a.horizon());
    let mut b = Builder::new(CriterionId::Corollary1, h);
    b.param("Q0", q0.describe()).param("Q1", q1fn.describe());
    let n = 4096;
    for i in 0..=n {
        let t = t0 + (h - t0) * i as f64 / n as f64;
        if !(q0.eval(t) > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Q0 must be positive; Q0({t}) = {}",
                q0.eval(t)
            )));
        }
    }
    let c = a.classification()?;
    let marginal = match c.label {
        CaseLabel::Marginal => Some(true),
        CaseLabel::Undetermined => None,
        _ => Some(false),
    };
    b.condition(
        "A",
        Condition::indicator(marginal, || {
            Some(Witness {
                condition: "A".into(),
                span: c.limit.windows.last().map(|w| (w.start, w.end)),
                detail: format!("Cesàro mean classified as {:?}", c.label),
            })
        }),
    );
    match c.lambda {
        Some(lambda) => {
            b.param("lambda", lambda);
            let q2 = a.table()?.q2_series();
            let lam_res = match super::classify::tail_lambda(a)? {
                Some((_, res)) => res,
                None => c.limit.tolerance.max(c.liminf.tolerance),
            };
            let bounds = a.windows()?;
            let (worst, res, witnesses) =
                scan_windows(&bounds, a.settings().samples_per_window, "B", |t| {
                    let slack = lambda * t - q0.eval(t).ln() / 4.0 + q1fn.eval(t) - q2.eval(t);
                    Ok((slack, t * lam_res))
                })?;
            let cond = Condition::non_strict(worst - res, res, || {
                witnesses.and_then(|w| w.into_iter().next())
            });
            b.condition("B", cond);
        }
        None => {
            b.condition(
                "B",
                Condition::unknown(0.0, 0.0, "no finite λ to test against"),
            );
        }
    }
    let d = q0.reciprocal_integrability();
    b.condition(
        "Q0_reciprocal_integrable",
        Condition::strict(d, 0.0, || {
            Some(Witness {
                condition: "Q0_reciprocal_integrable".into(),
                span: None,
                detail: format!("{} is not integrable at infinity", q0.describe()),
            })
        }),
    );
    b.condition(
        "Q1_bounded",
        Condition::indicator(Some(q1fn.bounded_above()), || {
            Some(Witness {
                condition: "Q1_bounded".into(),
                span: None,
                detail: format!("{} grows without bound", q1fn.describe()),
            })
        }),
    );
    Ok(b.finish())
}

pub fn check_theorem4(
    profile: &CoefficientProfile,
    lambda: f64,
    epsilon: f64,
    alpha: f64,
    horizon: f64,
) -> Result<CriterionVerdict> {
    theorem4_with(
        &ProfileAnalysis::new(profile, horizon)?,
        lambda,
        epsilon,
        alpha,
    )
}

pub(crate) fn theorem4_with(
    a: &ProfileAnalysis,
    lambda: f64,
    epsilon: f64,
    alpha: f64,
) -> Result<CriterionVerdict> {
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon", "must be positive"));
    }
    let mut b = Builder::new(CriterionId::Theorem4, a.horizon());
    b.param("lambda", lambda)
        .param("epsilon", epsilon)
        .param("alpha", alpha);
    b.condition("5", diverges("5", &shifted_exponential(a, lambda)?));
    let e = weighted_estimate(a, alpha, LimitKind::LimInf)?;
    b.condition("6", liminf_below("6", &e, lambda - epsilon));
    Ok(b.finish())
}

pub fn check_corollary2(
    profile: &CoefficientProfile,
    lambda: f64,
    epsilon: f64,
    horizon: f64,
) -> Result<CriterionVerdict> {
    corollary2_with(&ProfileAnalysis::new(profile, horizon)?, lambda, epsilon)
}

pub(crate) fn corollary2_with(
    a: &ProfileAnalysis,
    lambda: f64,
    epsilon: f64,
) -> Result<CriterionVerdict> {
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon", "must be positive"));
    }
    let mut b = Builder::new(CriterionId::Corollary2, a.horizon());
    b.param("lambda", lambda).param("epsilon", epsilon);
    let t = a.table()?;
    let vals: Vec<f64> = t
        .grid()
        .iter()
        .zip(t.q2())
        .map(|(s, q2)| q2 - lambda * s)
        .collect();
    b.condition(
        "C",
        level_set_growth("C", t.grid(), &vals, a.t0(), a.horizon()),
    );
    let e = weighted_estimate(a, 1.0, LimitKind::LimInf)?;
    b.condition("D", liminf_below("D", &e, lambda - epsilon));
    Ok(b.finish())
}

pub fn check_theorem5(
    profile: &CoefficientProfile,
    f: &TestFunction,
    horizon: f64,
) -> Result<CriterionVerdict> {
    theorem5_with(&ProfileAnalysis::new(profile, horizon)?, f)
}

pub(crate) fn theorem5_with(a: &ProfileAnalysis, f: &TestFunction) -> Result<CriterionVerdict> {
    let mut b = Builder::new(CriterionId::Theorem5, a.horizon());
    b.param("f", f.describe());
    let data = if f.is_unit() {
        None
    } else {
        Some(test_function_data(a, f)?)
    };
    b.condition("1", condition1(a, f, data.as_ref())?);
    match &data {
        None => {
            let span = a.windows()?;
            b.condition(
                "7",
                Condition::indicator(Some(false), || {
                    Some(Witness {
                        condition: "7".into(),
                        span: Some((span[0], a.horizon())),
                        detail: "for f ≡ 1 the functional vanishes identically".into(),
                    })
                }),
            );
        }
        Some(d) => {
            let k = k_estimate(a, f, d)?;
            let span = k.windows.last().map(|w| (w.start, w.end));
            let pass = match k.trend {
                Trend::DivergesDown => Some(true),
                Trend::Converged | Trend::DivergesUp => Some(false),
                _ => None,
            };
            let mut c = Condition::indicator(pass, || {
                Some(Witness {
                    condition: "7".into(),
                    span,
                    detail: format!(
                        "window minima trend {:?}, last {:.6e}",
                        k.trend,
                        k.last_statistic()
                    ),
                })
            });
            if pass == Some(true) {
                c.margin = f64::INFINITY;
            }
            b.condition("7", c);
        }
    }
    Ok(b.finish())
}

/// `δ > m(ε)` for a Mathieu profile `q = δ + ε cos 2t`.
pub fn check_corollary3(
    profile: &CoefficientProfile,
    tol: f64,
    horizon: f64,
) -> Result<CriterionVerdict> {
    let mut b = Builder::new(CriterionId::Corollary3, horizon);
    let FamilyParams::Mathieu { delta, epsilon } = profile.params() else {
        return Ok(b.inconclusive("applies to Mathieu profiles only").finish());
    };
    b.param("delta", delta)
        .param("epsilon", epsilon)
        .param("tol", tol);
    let m = mathieu::check_corollary3(delta, epsilon, tol)?;
    b.param("mu_star", m.mu_star).param("m_eps", m.m_eps);
    b.condition(
        "delta_above_m",
        Condition::strict(m.margin, tol, || {
            Some(Witness {
                condition: "delta_above_m".into(),
                span: None,
                detail: format!("δ = {delta} does not exceed m(ε) = {}", m.m_eps),
            })
        }),
    );
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{corollary3_test_function, unit_test_function};
    use crate::criteria::VerdictStatus::*;

    fn constant(v: f64) -> CoefficientProfile {
        CoefficientProfile::constant(v, 0.0).unwrap()
    }

    #[test]
    fn theorem3_on_constants() {
        let f = unit_test_function();
        let v = check_theorem3(&constant(1.0), &f, 0.0, 1.0, 200.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["3"] < 0.0);
        let v = check_theorem3(&constant(0.0), &f, 1.0, 1.0, 200.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["4"] < 0.0);
    }

    #[test]
    fn theorem3_alternates() {
        let f = unit_test_function();
        let z = constant(0.0);
        let v = check_theorem3_with(&z, &f, 0.0, 1.0, Condition4::LevelSet, 200.0).unwrap();
        assert!(v.margins["4"] > 0.0);
        let v = check_theorem3_with(&z, &f, 1.0, 1.0, Condition4::LevelSet, 200.0).unwrap();
        assert!(v.margins["4"] <= 0.0);
        let v = check_theorem3_with(&z, &f, 1.0, 1.0, Condition4::SquareIntegral, 200.0).unwrap();
        assert!(v.margins["4"] < 0.0);
    }

    #[test]
    fn corollary1_zero_profile_fails() {
        let q0 = Auxiliary::Power {
            scale: 1.0,
            exponent: 2.0,
        };
        let v = check_corollary1(
            &CoefficientProfile::constant(0.0, 1.0).unwrap(),
            &q0,
            &Auxiliary::Constant { value: 0.0 },
            500.0,
        )
        .unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["B"] < 0.0);
        assert!(v.margins["Q0_reciprocal_integrable"] > 0.0);
    }

    #[test]
    fn theorem4_and_corollary2_constants() {
        let v = check_theorem4(&constant(0.0), 0.0, 0.5, 1.0, 200.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["5"] > 0.0 && v.margins["6"] < 0.0);
        let v = check_theorem4(&constant(1.0), 0.0, 1.0, 1.0, 200.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        let v = check_corollary2(&constant(1.0), 0.0, 1.0, 200.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["C"] > 0.0);
        let v = check_corollary2(&constant(-1.0), -10.0, 1.0, 1000.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["C"] <= 0.0);
    }

    #[test]
    fn interleaved_construct_meets_corollary2() {
        let p = CoefficientProfile::interleaved_cubic(std::f64::consts::PI).unwrap();
        let v = check_corollary2(&p, 0.0, 1.0, 300.0).unwrap();
        assert_eq!(v.status, SatisfiedOnHorizon, "{v:?}");
        let v = check_theorem4(&p, 0.0, 1.0, 1.0, 300.0).unwrap();
        assert_eq!(v.status, SatisfiedOnHorizon, "{v:?}");
    }

    #[test]
    fn theorem5_unit_weight_fails() {
        let v = check_theorem5(&constant(1.0), &unit_test_function(), 100.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        let f = corollary3_test_function(0.5).unwrap();
        let v = check_theorem5(&constant(-1.0), &f, 100.0).unwrap();
        assert_eq!(v.status, FailedOnHorizon);
        assert!(v.margins["1"] < 0.0);
    }

    #[test]
    fn corollary3_criterion() {
        let delta = -(std::f64::consts::PI + 2.0) / (2.0 * (std::f64::consts::PI + 1.0));
        let p = CoefficientProfile::mathieu(delta, 4.0, 0.0).unwrap();
        let v = check_corollary3(&p, 1e-9, 100.0).unwrap();
        assert_eq!(v.status, SatisfiedOnHorizon);
        let p = CoefficientProfile::mathieu(-2.0, 1.0, 0.0).unwrap();
        assert_eq!(
            check_corollary3(&p, 1e-9, 100.0).unwrap().status,
            FailedOnHorizon
        );
        assert_eq!(
            check_corollary3(&constant(1.0), 1e-9, 100.0)
                .unwrap()
                .status,
            Inconclusive
        );
    }
}
