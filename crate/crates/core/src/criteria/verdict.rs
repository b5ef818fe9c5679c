use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::quad::{AsymptoticEstimate, ImproperIntegral, Trend};
use crate::serde_ext::map_f64_ext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriterionId {
    Deng,
    #[serde(rename = "Kong_i")]
    KongI,
    #[serde(rename = "Kong_ii")]
    KongII,
    Theorem3,
    Corollary1,
    Theorem4,
    Corollary2,
    Theorem5,
    Corollary3,
    Hartman,
    Kamenev,
    Sturm,
}

impl CriterionId {
    pub const ALL: [CriterionId; 12] = [
        CriterionId::Deng,
        CriterionId::KongI,
        CriterionId::KongII,
        CriterionId::Theorem3,
        CriterionId::Corollary1,
        CriterionId::Theorem4,
        CriterionId::Corollary2,
        CriterionId::Theorem5,
        CriterionId::Corollary3,
        CriterionId::Hartman,
        CriterionId::Kamenev,
        CriterionId::Sturm,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictStatus {
    SatisfiedOnHorizon,
    FailedOnHorizon,
    Inconclusive,
}

/// A criterion parameter as echoed in the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Real(f64),
    Text(String),
    List(Vec<f64>),
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Real(v)
    }
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

impl From<Vec<f64>> for Param {
    fn from(v: Vec<f64>) -> Self {
        Param::List(v)
    }
}

/// A concrete observation that violates a condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: String,
    /// The time window where the violation was observed.
    pub span: Option<(f64, f64)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion_id: CriterionId,
    pub params: BTreeMap<String, Param>,
    pub status: VerdictStatus,
    /// Decision margins per condition; a condition passes iff its margin is positive.
    #[serde(with = "map_f64_ext")]
    pub margins: BTreeMap<String, f64>,
    /// Numerical resolution of each margin.
    #[serde(with = "map_f64_ext")]
    pub resolution: BTreeMap<String, f64>,
    pub witnesses: Vec<Witness>,
    pub horizon: f64,
    pub notes: Vec<String>,
}

impl CriterionVerdict {
    pub fn is_satisfied(&self) -> bool {
        self.status == VerdictStatus::SatisfiedOnHorizon
    }

    /// Every margin exceeds ten times its resolution.
    pub fn is_robust(&self) -> bool {
        self.margins.iter().all(|(k, &m)| {
            let r = self.resolution.get(k).copied().unwrap_or(0.0);
            m > 10.0 * r && m > 0.0
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Pass,
    Fail,
    Unknown,
}

/// The evaluation of one sub-condition.
#[derive(Clone, Debug)]
pub(crate) struct Condition {
    pub margin: f64,
    pub resolution: f64,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl Condition {
    /// `raw ≥ 0` up to `res`: margin `raw + res`.
    pub fn non_strict(raw: f64, res: f64, witness: impl FnOnce() -> Option<Witness>) -> Self {
        let margin = sanitize(raw + res);
        if margin > 0.0 {
            Self::with(margin, res, Outcome::Pass, None)
        } else {
            Self::failing(margin, res, witness())
        }
    }

    /// `raw > 0` beyond `res`: margin `raw - res`.
    pub fn strict(raw: f64, res: f64, witness: impl FnOnce() -> Option<Witness>) -> Self {
        let margin = sanitize(raw - res);
        if margin > 0.0 {
            Self::with(margin, res, Outcome::Pass, None)
        } else if raw + res <= 0.0 {
            Self::failing(margin, res, witness())
        } else {
            Self::with(margin, res, Outcome::Unknown, None)
                .noted("margin within numerical resolution")
        }
    }

    pub fn indicator(pass: Option<bool>, witness: impl FnOnce() -> Option<Witness>) -> Self {
        match pass {
            Some(true) => Self::with(1.0, 0.0, Outcome::Pass, None),
            Some(false) => Self::failing(-1.0, 0.0, witness()),
            None => Self::with(-1.0, 0.0, Outcome::Unknown, None),
        }
    }

    pub fn unknown(margin: f64, res: f64, note: impl Into<String>) -> Self {
        Self::with(sanitize(margin), res, Outcome::Unknown, None).noted(note)
    }

    fn failing(margin: f64, res: f64, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::with(margin, res, Outcome::Fail, Some(w)),
            None => {
                Self::with(margin, res, Outcome::Unknown, None).noted("violation not witnessed")
            }
        }
    }

    fn with(margin: f64, resolution: f64, outcome: Outcome, witness: Option<Witness>) -> Self {
        Self {
            margin,
            resolution,
            outcome,
            witness,
            note: None,
        }
    }

    pub fn noted(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v
    }
}

pub(crate) struct Builder {
    id: CriterionId,
    horizon: f64,
    params: BTreeMap<String, Param>,
    margins: BTreeMap<String, f64>,
    resolution: BTreeMap<String, f64>,
    witnesses: Vec<Witness>,
    notes: Vec<String>,
    outcomes: Vec<Outcome>,
    forced: Option<VerdictStatus>,
}

impl Builder {
    pub fn new(id: CriterionId, horizon: f64) -> Self {
        Self {
            id,
            horizon,
            params: BTreeMap::new(),
            margins: BTreeMap::new(),
            resolution: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            outcomes: Vec::new(),
            forced: None,
        }
    }

    pub fn param(&mut self, name: &str, v: impl Into<Param>) -> &mut Self {
        self.params.insert(name.to_string(), v.into());
        self
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    pub fn condition(&mut self, label: &str, c: Condition) -> &mut Self {
        self.margins.insert(label.to_string(), c.margin);
        self.resolution.insert(label.to_string(), c.resolution);
        if let Some(w) = c.witness {
            self.witnesses.push(w);
        }
        if let Some(n) = c.note {
            self.notes.push(format!("{label}: {n}"));
        }
        self.outcomes.push(c.outcome);
        self
    }

    pub fn witness(&mut self, w: Witness) -> &mut Self {
        self.witnesses.push(w);
        self
    }

    /// Ends evaluation early with an `Inconclusive` verdict.
    pub fn inconclusive(&mut self, why: impl Into<String>) -> &mut Self {
        self.notes.push(why.into());
        self.forced = Some(VerdictStatus::Inconclusive);
        self
    }

    pub fn finish(&mut self) -> CriterionVerdict {
        let status = self.forced.unwrap_or_else(|| {
            if self.outcomes.contains(&Outcome::Fail) {
                VerdictStatus::FailedOnHorizon
            } else if !self.outcomes.is_empty() && self.outcomes.iter().all(|&o| o == Outcome::Pass)
            {
                VerdictStatus::SatisfiedOnHorizon
            } else {
                VerdictStatus::Inconclusive
            }
        });
        CriterionVerdict {
            criterion_id: self.id,
            params: std::mem::take(&mut self.params),
            status,
            margins: std::mem::take(&mut self.margins),
            resolution: std::mem::take(&mut self.resolution),
            witnesses: std::mem::take(&mut self.witnesses),
            horizon: self.horizon,
            notes: std::mem::take(&mut self.notes),
        }
    }
}

fn last_window(e: &AsymptoticEstimate) -> Option<(f64, f64)> {
    e.windows.last().map(|w| (w.start, w.end))
}

/// Signed distance of a limit estimate from a threshold; `±∞` for divergent trends.
pub(crate) fn estimate_excess(e: &AsymptoticEstimate, threshold: f64) -> f64 {
    match e.trend {
        Trend::DivergesUp => f64::INFINITY,
        Trend::DivergesDown => f64::NEG_INFINITY,
        _ => e.value - threshold,
    }
}

/// `limsup ≥ threshold` (or `>` when `strict`) from a windowed estimate.
pub(crate) fn limsup_above(
    label: &str,
    e: &AsymptoticEstimate,
    threshold: f64,
    strict: bool,
) -> Condition {
    let raw = estimate_excess(e, threshold);
    if e.trend == Trend::Undetermined {
        return Condition::unknown(
            raw,
            e.tolerance,
            "window statistics drift without a clear trend",
        );
    }
    let witness = || {
        // Every window maximum lies below the threshold.
        let worst = e
            .windows
            .iter()
            .map(|w| w.statistic)
            .fold(f64::NEG_INFINITY, f64::max);
        (worst < threshold).then(|| Witness {
            condition: label.to_string(),
            span: last_window(e),
            detail: format!("largest window maximum {worst:.6e} is below {threshold:.6e}"),
        })
    };
    if strict {
        Condition::strict(raw, e.tolerance, witness)
    } else {
        Condition::non_strict(raw, e.tolerance, witness)
    }
}

/// `liminf ≤ threshold` from a windowed estimate.
pub(crate) fn liminf_below(label: &str, e: &AsymptoticEstimate, threshold: f64) -> Condition {
    let raw = -estimate_excess(e, threshold);
    if e.trend == Trend::Undetermined {
        return Condition::unknown(
            raw,
            e.tolerance,
            "window statistics drift without a clear trend",
        );
    }
    Condition::non_strict(raw, e.tolerance, || {
        let best = e
            .windows
            .iter()
            .map(|w| w.statistic)
            .fold(f64::INFINITY, f64::min);
        (best > threshold).then(|| Witness {
            condition: label.to_string(),
            span: last_window(e),
            detail: format!("smallest window minimum {best:.6e} exceeds {threshold:.6e}"),
        })
    })
}

fn tail_span(r: &ImproperIntegral) -> Option<(f64, f64)> {
    let h = &r.horizons;
    (h.len() >= 5).then(|| (h[h.len() - 5], h[h.len() - 1]))
}

/// `∫ exp{E} = +∞`: margin is the smallest recent increment ratio minus 0.98.
pub(crate) fn diverges(label: &str, r: &ImproperIntegral) -> Condition {
    use crate::quad::Convergence;
    let margin = r.min_recent_ratio() - 0.98;
    match r.classification {
        Convergence::DivergesLikely => {
            Condition::strict(margin.max(f64::MIN_POSITIVE), 0.0, || None)
        }
        Convergence::ConvergesLikely => {
            Condition::non_strict(margin.min(-f64::MIN_POSITIVE), 0.0, || {
                Some(Witness {
                    condition: label.to_string(),
                    span: tail_span(r),
                    detail: format!("doubling increments shrink, ratios {:?}", recent(&r.ratios)),
                })
            })
        }
        Convergence::Undetermined => {
            Condition::unknown(margin, 0.0, "increment ratios neither shrink nor persist")
        }
    }
}

/// `∫ exp{E} < +∞`: margin is 0.9 minus the largest recent increment ratio.
pub(crate) fn converges(label: &str, r: &ImproperIntegral) -> Condition {
    use crate::quad::Convergence;
    let margin = 0.9 - r.max_recent_ratio();
    match r.classification {
        Convergence::ConvergesLikely => {
            Condition::strict(margin.max(f64::MIN_POSITIVE), 0.0, || None)
        }
        Convergence::DivergesLikely => {
            Condition::non_strict(margin.min(-f64::MIN_POSITIVE), 0.0, || {
                Some(Witness {
                    condition: label.to_string(),
                    span: tail_span(r),
                    detail: if r.saturated {
                        "integrand overflows".to_string()
                    } else {
                        format!(
                            "doubling increments persist, ratios {:?}",
                            recent(&r.ratios)
                        )
                    },
                })
            })
        }
        Convergence::Undetermined => {
            Condition::unknown(margin, 0.0, "increment ratios neither shrink nor persist")
        }
    }
}

fn recent(r: &[f64]) -> Vec<f64> {
    r[r.len().saturating_sub(4)..]
        .iter()
        .map(|v| (v * 1e4).round() / 1e4)
        .collect()
}
