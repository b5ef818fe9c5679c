use serde::{Deserialize, Serialize};

use super::ProfileAnalysis;
use crate::coeff::CoefficientProfile;
use crate::error::Result;
use crate::quad::{estimate_asymptotic, AsymptoticEstimate, LimitKind, Trend};
use crate::serde_ext::opt_f64_ext;

/// Behaviour of the Cesàro mean `M(t) = Q2(t)/t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `M → +∞`.
    Regular,
    /// `-∞ < liminf M < limsup M`.
    Irregular,
    /// `M → λ` finite.
    Marginal,
    /// `liminf M = -∞`, `limsup M > -∞`.
    SubExtremal,
    /// `M → -∞`.
    Extremal,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseClassification {
    pub label: CaseLabel,
    #[serde(with = "opt_f64_ext")]
    pub lambda: Option<f64>,
    pub liminf: AsymptoticEstimate,
    pub limsup: AsymptoticEstimate,
    pub limit: AsymptoticEstimate,
    pub horizon: f64,
}

pub fn classify(profile: &CoefficientProfile, horizon: f64) -> Result<CaseClassification> {
    classify_with(&ProfileAnalysis::new(profile, horizon)?)
}

fn finite(e: &AsymptoticEstimate) -> bool {
    matches!(e.trend, Trend::Converged | Trend::Oscillating) && e.value.is_finite()
}

/// `lim Q1 = Q1(h) + ∫_h^∞ q` with its resolution, when the tail is available.
/// For a convergent `Q1` this is also the limit of `Q2(t)/t`, free of the
/// `O(ln t / t)` bias of the Cesàro mean itself.
pub(super) fn tail_lambda(a: &ProfileAnalysis) -> Result<Option<(f64, f64)>> {
    let h = a.horizon();
    let Some(tail) = a.profile().tail_integral(h) else {
        return Ok(None);
    };
    if !tail.value.is_finite() {
        return Ok(None);
    }
    let table = a.table()?;
    let res = tail.band + table.tol() * (h - a.t0());
    Ok(Some((table.q1_at(h)? + tail.value, res)))
}

pub(super) fn classify_with(a: &ProfileAnalysis) -> Result<CaseClassification> {
    let table = a.table()?;
    let q2 = table.q2_series();
    let mean = |t: f64| q2.eval(t) / t;
    let opts = a.settings().window_options();
    let (t0, h) = (a.t0(), a.horizon());
    let liminf = estimate_asymptotic(mean, LimitKind::LimInf, t0, h, opts)?;
    let limsup = estimate_asymptotic(mean, LimitKind::LimSup, t0, h, opts)?;
    let limit = estimate_asymptotic(mean, LimitKind::Limit, t0, h, opts)?;

    use Trend::*;
    let tol = liminf.tolerance.max(limsup.tolerance);
    let mut lambda = None;
    let label = if liminf.trend == DivergesUp {
        CaseLabel::Regular
    } else if limsup.trend == DivergesDown && limit.trend == DivergesDown {
        CaseLabel::Extremal
    } else if liminf.trend == DivergesDown && (finite(&limsup) || limsup.trend == DivergesUp) {
        CaseLabel::SubExtremal
    } else if finite(&liminf) && finite(&limsup) {
        let spread = limsup.value - liminf.value;
        if liminf.trend == Converged && limsup.trend == Converged && spread <= tol {
            lambda = Some(match tail_lambda(a)? {
                Some((v, _)) => v,
                None if limit.trend == Converged => limit.value,
                None => 0.5 * (liminf.value + limsup.value),
            });
            CaseLabel::Marginal
        } else if spread > tol {
            CaseLabel::Irregular
        } else {
            CaseLabel::Undetermined
        }
    } else {
        CaseLabel::Undetermined
    };
    Ok(CaseClassification {
        label,
        lambda,
        liminf,
        limsup,
        limit,
        horizon: h,
    })
}
