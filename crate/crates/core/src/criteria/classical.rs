//! Criteria from the literature used for comparison: Deng's tail bound,
//! Kong's interval averages, and the Hartman, Kamenev and Sturm stubs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::CaseLabel;
use super::verdict::{limsup_above, Builder, Condition, Outcome};
use super::{CriterionId, CriterionVerdict, ProfileAnalysis, VerdictStatus, Witness};
use crate::coeff::CoefficientProfile;
use crate::error::{Error, Result};
use crate::quad::{
    estimate_asymptotic, estimate_from_samples, integrate_vec, weighted_average,
    AsymptoticEstimate, CumulativeTable, LimitKind, Trend,
};

/// Per-window scan of a pointwise margin: returns the smallest margin and,
/// if every window contains a definite violation, one witness per window.
pub(super) fn scan_windows<F>(
    bounds: &[f64],
    per_window: usize,
    label: &str,
    mut margin_at: F,
) -> Result<(f64, f64, Option<Vec<Witness>>)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut worst = f64::INFINITY;
    let mut worst_res: f64 = 0.0;
    let mut witnesses = Vec::new();
    let mut every = true;
    for w in bounds.windows(2) {
        let mut found = None;
        for i in 0..=per_window {
            let t = w[0] + (w[1] - w[0]) * i as f64 / per_window as f64;
            let (m, res) = margin_at(t)?;
            if m + res < worst {
                worst = m + res;
                worst_res = res;
            }
            if found.is_none() && m + res < 0.0 {
                found = Some((t, m));
            }
        }
        match found {
            Some((t, m)) => witnesses.push(Witness {
                condition: label.to_string(),
                span: Some((t, t)),
                detail: format!("margin {m:.6e} at t = {t}"),
            }),
            None => every = false,
        }
    }
    Ok((worst, worst_res, every.then_some(witnesses)))
}

/// Tail `∫_t^∞ q` together with a half-width.
enum Tail<'a> {
    Closed(&'a CoefficientProfile),
    /// `L - Q1(t)` with `L` extrapolated from window averages of `Q1`.
    Surrogate {
        table: CumulativeTable,
        limit: f64,
        band: f64,
    },
    Infinite(f64),
}

impl Tail<'_> {
    fn at(&self, t: f64) -> Result<(f64, f64)> {
        match self {
            Tail::Closed(p) => {
                let v = p.tail_integral(t).expect("closed tail");
                Ok((v.value, v.band))
            }
            Tail::Surrogate { table, limit, band } => Ok((limit - table.q1_at(t)?, *band)),
            Tail::Infinite(s) => Ok((*s, 0.0)),
        }
    }
}

fn window_mean(table: &CumulativeTable, a: f64, b: f64) -> f64 {
    let s = table.q1_series();
    let n = 4096;
    let h = (b - a) / n as f64;
    let mut acc = 0.5 * (s.eval(a) + s.eval(b));
    for i in 1..n {
        acc += s.eval(a + h * i as f64);
    }
    acc / n as f64
}

fn surrogate_tail<'a>(a: &ProfileAnalysis) -> Result<std::result::Result<Tail<'a>, String>> {
    let h = a.horizon();
    let t_ext = (4.0 * h).min(a.profile().domain_end());
    if t_ext < 2.0 * h {
        return Ok(Err(format!(
            "profile domain ends at {t_ext}; no room beyond the horizon for a tail"
        )));
    }
    let table = CumulativeTable::build(a.profile(), t_ext, a.settings().tol)?;
    // Averages of Q1 over consecutive doubling windows suppress endpoint oscillation.
    let e = t_ext / 8.0;
    let a0 = window_mean(&table, e, 2.0 * e);
    let a1 = window_mean(&table, 2.0 * e, 4.0 * e);
    let a2 = window_mean(&table, 4.0 * e, 8.0 * e);
    let (d1, d2) = (a1 - a0, a2 - a1);
    let rho = if d1 != 0.0 { d2 / d1 } else { 0.0 };
    if d1 == 0.0 && d2 == 0.0 {
        return Ok(Ok(Tail::Surrogate {
            limit: a2,
            band: 1e3 * a.settings().tol * t_ext,
            table,
        }));
    }
    if rho >= 1.0 && d2.abs() > 1e-9 {
        return Ok(Ok(Tail::Infinite(d2.signum() * f64::INFINITY)));
    }
    if !(rho.abs() < 0.95) {
        return Ok(Err(format!(
            "no convergence evidence for ∫q: window-average increments {d1:.3e}, {d2:.3e}"
        )));
    }
    let correction = d2 * rho / (1.0 - rho);
    Ok(Ok(Tail::Surrogate {
        limit: a2 + correction,
        band: 0.25 * correction.abs() + 1e3 * a.settings().tol * t_ext,
        table,
    }))
}

/// Deng: `∫_t^∞ q ≥ α0/t` for large `t`, with `α0 > 1/4`.
pub fn check_deng(
    profile: &CoefficientProfile,
    alpha0: f64,
    horizon: f64,
) -> Result<CriterionVerdict> {
    deng_with(&ProfileAnalysis::new(profile, horizon)?, alpha0)
}

pub(crate) fn deng_with(a: &ProfileAnalysis, alpha0: f64) -> Result<CriterionVerdict> {
    let mut b = Builder::new(CriterionId::Deng, a.horizon());
    b.param("alpha0", alpha0);
    if !(alpha0 > 0.25) {
        return Ok(b
            .inconclusive(format!("alpha0 = {alpha0} must exceed 1/4"))
            .finish());
    }
    let tail = if a.profile().tail_integral(a.horizon()).is_some() {
        b.note("closed-form tail");
        Tail::Closed(a.profile())
    } else {
        match surrogate_tail(a)? {
            Ok(t) => {
                if let Tail::Surrogate { limit, band, .. } = &t {
                    b.note(format!(
                        "tail surrogate: lim Q1 ≈ {limit:.12e} ± {band:.1e}"
                    ));
                }
                t
            }
            Err(why) => return Ok(b.inconclusive(why).finish()),
        }
    };
    let bounds = a.windows()?;
    let label = "tail_inequality";
    let (worst, res, witnesses) =
        scan_windows(&bounds, a.settings().samples_per_window, label, |t| {
            let (v, band) = tail.at(t)?;
            let m = t * v - alpha0;
            let floor = 64.0 * f64::EPSILON * (t * v).abs().max(alpha0);
            Ok((
                if m.is_nan() { f64::NEG_INFINITY } else { m },
                t * band + floor,
            ))
        })?;
    let c = if worst > 0.0 {
        Condition {
            margin: worst,
            resolution: res,
            outcome: Outcome::Pass,
            witness: None,
            note: None,
        }
    } else if let Some(ws) = witnesses {
        let n = ws.len();
        let mut ws = ws.into_iter();
        let first = ws.next().unwrap();
        b.note(format!("violations recur in all {n} windows"));
        for w in ws {
            b.witness(w);
        }
        Condition {
            margin: worst,
            resolution: res,
            outcome: Outcome::Fail,
            witness: Some(first),
            note: None,
        }
    } else {
        Condition::unknown(worst, res, "violations do not recur in every window")
    };
    b.condition(label, c);
    Ok(b.finish())
}

/// The two branches of Kong's criterion, evaluated for every sampled `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KongVerdicts {
    pub branch_i: CriterionVerdict,
    pub branch_ii: CriterionVerdict,
}

impl KongVerdicts {
    /// The criterion holds when either branch holds.
    pub fn combined(&self) -> VerdictStatus {
        use VerdictStatus::*;
        match (self.branch_i.status, self.branch_ii.status) {
            (SatisfiedOnHorizon, _) | (_, SatisfiedOnHorizon) => SatisfiedOnHorizon,
            (FailedOnHorizon, FailedOnHorizon) => FailedOnHorizon,
            _ => Inconclusive,
        }
    }

    pub fn into_vec(self) -> Vec<CriterionVerdict> {
        vec![self.branch_i, self.branch_ii]
    }
}

/// Kong: for each `r` and some `λ > 1`, either (i) both
/// `t^{1-λ}∫_r^t (t-s)^λ q` and `t^{1-λ}∫_r^t (s-r)^λ q` have limsup above
/// `λ²/(4(λ-1))`, or (ii) `t^{1-λ}∫_r^t (s-r)^λ [q(s) + q(2t-s)]` has limsup
/// above `λ²/(2(λ-1))`. An empty `r_samples` uses `t0, t0+10, t0+100`.
pub fn check_kong(
    profile: &CoefficientProfile,
    lambda_exp: f64,
    r_samples: &[f64],
    horizon: f64,
) -> Result<KongVerdicts> {
    kong_with(
        &ProfileAnalysis::new(profile, horizon)?,
        lambda_exp,
        r_samples,
    )
}

pub(crate) fn kong_with(
    a: &ProfileAnalysis,
    lambda_exp: f64,
    r_samples: &[f64],
) -> Result<KongVerdicts> {
    if !(lambda_exp > 1.0 && lambda_exp.is_finite()) {
        return Err(Error::param(
            "lambda_exp",
            format!("must exceed 1, got {lambda_exp}"),
        ));
    }
    let t0 = a.t0();
    let h = a.horizon();
    let requested: Vec<f64> = if r_samples.is_empty() {
        vec![t0, t0 + 10.0, t0 + 100.0]
    } else {
        r_samples.to_vec()
    };
    if let Some(&r) = requested.iter().find(|&&r| !(r >= t0)) {
        return Err(Error::param("r", format!("r = {r} precedes t0 = {t0}")));
    }
    let grid = a.functional_grid()?;
    let start = grid[0];
    let (rs, dropped): (Vec<f64>, Vec<f64>) = requested.iter().partition(|&&r| r < start);

    let mut bi = Builder::new(CriterionId::KongI, h);
    let mut bii = Builder::new(CriterionId::KongII, h);
    for b in [&mut bi, &mut bii] {
        b.param("lambda_exp", lambda_exp).param("r", rs.clone());
        if !dropped.is_empty() {
            b.note(format!(
                "r samples {dropped:?} lie inside the evaluation window and were skipped"
            ));
        }
    }
    if rs.is_empty() {
        bi.inconclusive("no usable r samples");
        bii.inconclusive("no usable r samples");
        return Ok(KongVerdicts {
            branch_i: bi.finish(),
            branch_ii: bii.finish(),
        });
    }
    let th_i = lambda_exp * lambda_exp / (4.0 * (lambda_exp - 1.0));
    let th_ii = 2.0 * th_i;
    let profile = a.profile();
    let reflect_ok =
        2.0 * h - rs.iter().cloned().fold(f64::INFINITY, f64::min) <= profile.domain_end();
    if !reflect_ok {
        bii.inconclusive(format!(
            "q(2t - s) needs the profile up to {}, beyond its domain end {}",
            2.0 * h - rs[0],
            profile.domain_end()
        ));
    }
    let tol = a.settings().tol;
    let windows = a.settings().windows;
    for &r in &rs {
        let values: Vec<[f64; 3]> = grid
            .par_iter()
            .map(|&t| {
                let mut breaks = profile.breakpoints(r, t);
                if reflect_ok {
                    breaks.extend(
                        profile
                            .breakpoints(t, 2.0 * t - r)
                            .iter()
                            .map(|&x| 2.0 * t - x),
                    );
                }
                breaks.sort_by(|x, y| x.total_cmp(y));
                let (v, _) = integrate_vec::<3, _>(
                    |s| {
                        let q = profile.eval(s)?;
                        let qr = if reflect_ok {
                            profile.eval(2.0 * t - s)?
                        } else {
                            0.0
                        };
                        let wt = ((t - s) / t).powf(lambda_exp);
                        let wr = ((s - r) / t).powf(lambda_exp);
                        Ok([wt * q, wr * q, wr * (q + qr)])
                    },
                    r,
                    t,
                    &breaks,
                    Some(2.0),
                    tol,
                )?;
                // t^{1-λ} (t-s)^λ = t · ((t-s)/t)^λ
                Ok([t * v[0], t * v[1], t * v[2]])
            })
            .collect::<Result<_>>()?;
        let col = |k: usize| values.iter().map(|v| v[k]).collect::<Vec<f64>>();
        let est =
            |k: usize| estimate_from_samples(&grid, &col(k), LimitKind::LimSup, t0, h, windows);
        let l1 = format!("i_first(r={r})");
        let l2 = format!("i_second(r={r})");
        bi.condition(&l1, limsup_above(&l1, &est(0)?, th_i, true));
        bi.condition(&l2, limsup_above(&l2, &est(1)?, th_i, true));
        if reflect_ok {
            let l3 = format!("ii(r={r})");
            bii.condition(&l3, limsup_above(&l3, &est(2)?, th_ii, true));
        }
    }
    Ok(KongVerdicts {
        branch_i: bi.finish(),
        branch_ii: bii.finish(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "which")]
pub enum ClassicalCriterion {
    /// Irregular Cesàro mean: `-∞ < liminf < limsup`.
    Hartman,
    /// `limsup t^{1-n} ∫ (t-s)^{n-1} q = +∞`.
    Kamenev { n: u32 },
    /// `q ≥ q0 > 0` on the evaluation window.
    Sturm { q0: Option<f64> },
}

pub fn check_classical(
    profile: &CoefficientProfile,
    which: ClassicalCriterion,
    horizon: f64,
) -> Result<CriterionVerdict> {
    classical_with(&ProfileAnalysis::new(profile, horizon)?, which)
}

pub fn check_sturm(
    profile: &CoefficientProfile,
    q0: Option<f64>,
    horizon: f64,
) -> Result<CriterionVerdict> {
    check_classical(profile, ClassicalCriterion::Sturm { q0 }, horizon)
}

fn window_of(e: &AsymptoticEstimate) -> Option<(f64, f64)> {
    e.windows.last().map(|w| (w.start, w.end))
}

pub(crate) fn classical_with(
    a: &ProfileAnalysis,
    which: ClassicalCriterion,
) -> Result<CriterionVerdict> {
    match which {
        ClassicalCriterion::Hartman => hartman(a),
        ClassicalCriterion::Kamenev { n } => kamenev(a, n),
        ClassicalCriterion::Sturm { q0 } => sturm(a, q0),
    }
}

fn hartman(a: &ProfileAnalysis) -> Result<CriterionVerdict> {
    let c = a.classification()?;
    let mut b = Builder::new(CriterionId::Hartman, a.horizon());
    b.note(format!("Cesàro mean classified as {:?}", c.label));
    let li = &c.liminf;
    let finite = match li.trend {
        Trend::Converged | Trend::Oscillating if li.value.is_finite() => Some(true),
        Trend::DivergesDown | Trend::DivergesUp => Some(false),
        _ => None,
    };
    b.condition(
        "liminf_finite",
        Condition::indicator(finite, || {
            Some(Witness {
                condition: "liminf_finite".into(),
                span: window_of(li),
                detail: format!("window minima of Q2(t)/t trend {:?}", li.trend),
            })
        }),
    );
    let tol = c.liminf.tolerance.max(c.limsup.tolerance);
    let spread = c.limsup.value - c.liminf.value;
    let outcome = match c.label {
        CaseLabel::Irregular => Some(true),
        CaseLabel::Marginal => Some(false),
        _ if spread.is_finite() && spread > tol => Some(true),
        _ => None,
    };
    let mut cond = Condition::indicator(outcome, || {
        Some(Witness {
            condition: "spread".into(),
            span: window_of(&c.limsup),
            detail: format!("liminf and limsup agree within {tol:.1e}"),
        })
    });
    if spread.is_finite() {
        cond.margin = spread - tol;
        cond.resolution = tol;
    }
    b.condition("spread", cond);
    Ok(b.finish())
}

fn kamenev(a: &ProfileAnalysis, n: u32) -> Result<CriterionVerdict> {
    let mut b = Builder::new(CriterionId::Kamenev, a.horizon());
    b.param("n", n as i64);
    if n < 2 {
        return Err(Error::param("n", "must be at least 2"));
    }
    let (t0, h) = (a.t0(), a.horizon());
    let est = if n == 2 {
        let q2 = a.table()?.q2_series();
        estimate_asymptotic(
            |t| q2.eval(t) / t,
            LimitKind::LimSup,
            t0,
            h,
            a.settings().window_options(),
        )?
    } else {
        let grid = a.functional_grid()?;
        let vals: Vec<f64> = grid
            .par_iter()
            .map(|&t| weighted_average(a.profile(), (n - 1) as f64, t, a.settings().tol))
            .collect::<Result<_>>()?;
        estimate_from_samples(&grid, &vals, LimitKind::LimSup, t0, h, a.settings().windows)?
    };
    let pass = match est.trend {
        Trend::DivergesUp => Some(true),
        Trend::Converged | Trend::DivergesDown => Some(false),
        Trend::Oscillating if est.value.is_finite() => Some(false),
        _ => None,
    };
    let mut c = Condition::indicator(pass, || {
        Some(Witness {
            condition: "limsup_infinite".into(),
            span: window_of(&est),
            detail: format!(
                "window maxima trend {:?}, last {:.6e}",
                est.trend,
                est.last_statistic()
            ),
        })
    });
    if pass == Some(true) {
        c.margin = f64::INFINITY;
    }
    b.condition("limsup_infinite", c);
    Ok(b.finish())
}

fn sturm(a: &ProfileAnalysis, q0: Option<f64>) -> Result<CriterionVerdict> {
    let mut b = Builder::new(CriterionId::Sturm, a.horizon());
    if let Some(q0) = q0 {
        if !(q0 > 0.0) {
            return Err(Error::param("q0", "must be positive"));
        }
        b.param("q0", q0);
    }
    let floor = q0.unwrap_or(0.0);
    let bounds = a.windows()?;
    let label = "q_above_q0";
    let (worst, _, witnesses) =
        scan_windows(&bounds, a.settings().samples_per_window, label, |t| {
            Ok((a.profile().eval(t)? - floor, 0.0))
        })?;
    let c = if worst > 0.0 {
        Condition::strict(worst, 0.0, || None)
    } else if let Some(ws) = witnesses {
        let mut it = ws.into_iter();
        let first = it.next();
        for w in it {
            b.witness(w);
        }
        Condition {
            margin: worst,
            resolution: 0.0,
            outcome: Outcome::Fail,
            witness: first,
            note: None,
        }
    } else {
        Condition::unknown(worst, 0.0, "q dips below q0 but not in every window")
    };
    b.condition(label, c);
    Ok(b.finish())
}
