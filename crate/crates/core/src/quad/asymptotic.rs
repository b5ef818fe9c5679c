//! Finite-horizon surrogates for `lim`, `liminf` and `limsup`.
//!
//! The second half of the horizon is split into geometrically growing
//! windows. Each window contributes one statistic (min, max or mean) and the
//! sequence of statistics is inspected for convergence or monotone drift.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_ext::f64_ext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LimitKind {
    Limit,
    LimInf,
    LimSup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trend {
    Converged,
    DivergesUp,
    DivergesDown,
    Oscillating,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowStat {
    pub start: f64,
    pub end: f64,
    pub statistic: f64,
    /// Where the statistic was attained (min/max) or the window midpoint (mean).
    pub at: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEstimate {
    pub kind: LimitKind,
    #[serde(with = "f64_ext")]
    pub value: f64,
    pub trend: Trend,
    pub windows: Vec<WindowStat>,
    pub horizon: f64,
    /// Spread below which consecutive statistics count as converged.
    pub tolerance: f64,
}

impl AsymptoticEstimate {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn last_statistic(&self) -> f64 {
        self.windows.last().map_or(f64::NAN, |w| w.statistic)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowOptions {
    pub windows: usize,
    pub samples_per_window: usize,
}

impl Default for WindowOptions {
    fn default() -> Self {
        Self {
            windows: 8,
            samples_per_window: 1024,
        }
    }
}

/// Window boundaries over the second half of `[t0, horizon]`.
pub fn window_bounds(t0: f64, horizon: f64, windows: usize) -> Result<Vec<f64>> {
    if !(horizon > t0) {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must exceed the series start {t0}"
        )));
    }
    if windows < 3 {
        return Err(Error::param(
            "windows",
            format!("need at least 3, got {windows}"),
        ));
    }
    let start = (0.5 * horizon).max(t0 + 0.5 * (horizon - t0));
    let n = windows as f64;
    let bounds = if start > 0.0 {
        let ratio = horizon / start;
        (0..=windows)
            .map(|k| {
                if k == windows {
                    horizon
                } else {
                    start * ratio.powf(k as f64 / n)
                }
            })
            .collect()
    } else {
        (0..=windows)
            .map(|k| {
                if k == windows {
                    horizon
                } else {
                    start + (horizon - start) * k as f64 / n
                }
            })
            .collect()
    };
    Ok(bounds)
}

/// Estimates a limit quantity of a closure-defined series.
pub fn estimate_asymptotic<F>(
    series: F,
    kind: LimitKind,
    t0: f64,
    horizon: f64,
    opts: WindowOptions,
) -> Result<AsymptoticEstimate>
where
    F: Fn(f64) -> f64,
{
    let bounds = window_bounds(t0, horizon, opts.windows)?;
    let m = opts.samples_per_window.max(8);
    let mut stats = Vec::with_capacity(opts.windows);
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / m as f64;
        let ts: Vec<f64> = (0..=m)
            .map(|i| if i == m { b } else { a + h * i as f64 })
            .collect();
        let vs: Vec<f64> = ts.iter().map(|&t| series(t)).collect();
        let stat = match kind {
            LimitKind::Limit => WindowStat {
                start: a,
                end: b,
                statistic: trapezoid_mean(&ts, &vs),
                at: 0.5 * (a + b),
            },
            LimitKind::LimInf | LimitKind::LimSup => {
                let sign = if kind == LimitKind::LimInf { 1.0 } else { -1.0 };
                let (mut idx, mut best) = (0, f64::INFINITY);
                for (i, &v) in vs.iter().enumerate() {
                    if sign * v < best {
                        best = sign * v;
                        idx = i;
                    }
                }
                let lo = ts[idx.saturating_sub(1)];
                let hi = ts[(idx + 1).min(m)];
                let (at, val) = golden_refine(|t| sign * series(t), lo, hi, ts[idx], best);
                WindowStat {
                    start: a,
                    end: b,
                    statistic: sign * val,
                    at,
                }
            }
        };
        stats.push(stat);
    }
    Ok(fit_trend(kind, stats, horizon))
}

/// Estimates a limit quantity from tabulated samples (ascending in `t`).
pub fn estimate_from_samples(
    ts: &[f64],
    vs: &[f64],
    kind: LimitKind,
    t0: f64,
    horizon: f64,
    windows: usize,
) -> Result<AsymptoticEstimate> {
    if ts.len() != vs.len() {
        return Err(Error::InvalidInput("sample arrays differ in length".into()));
    }
    let bounds = window_bounds(t0, horizon, windows)?;
    let mut stats = Vec::with_capacity(windows);
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let lo = ts.partition_point(|&t| t < a);
        let hi = ts.partition_point(|&t| t <= b);
        if hi <= lo {
            return Err(Error::InvalidInput(format!(
                "no samples in window [{a}, {b}]"
            )));
        }
        let wt = &ts[lo..hi];
        let wv = &vs[lo..hi];
        let stat = match kind {
            LimitKind::Limit => WindowStat {
                start: a,
                end: b,
                statistic: if wt.len() > 1 {
                    trapezoid_mean(wt, wv)
                } else {
                    wv[0]
                },
                at: 0.5 * (a + b),
            },
            LimitKind::LimInf | LimitKind::LimSup => {
                let sign = if kind == LimitKind::LimInf { 1.0 } else { -1.0 };
                let mut idx = 0;
                for i in 1..wv.len() {
                    if sign * wv[i] < sign * wv[idx] {
                        idx = i;
                    }
                }
                let (at, val) = if idx > 0 && idx + 1 < wv.len() {
                    parabolic_vertex(
                        (wt[idx - 1], sign * wv[idx - 1]),
                        (wt[idx], sign * wv[idx]),
                        (wt[idx + 1], sign * wv[idx + 1]),
                    )
                } else {
                    (wt[idx], sign * wv[idx])
                };
                WindowStat {
                    start: a,
                    end: b,
                    statistic: sign * val,
                    at,
                }
            }
        };
        stats.push(stat);
    }
    Ok(fit_trend(kind, stats, horizon))
}

fn trapezoid_mean(ts: &[f64], vs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..ts.len() {
        acc += 0.5 * (ts[i] - ts[i - 1]) * (vs[i] + vs[i - 1]);
    }
    acc / (ts[ts.len() - 1] - ts[0])
}

/// Minimum of the parabola through three points, clamped to the sampled value.
fn parabolic_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> (f64, f64) {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    if !(curv > 0.0) {
        return (x1, y1);
    }
    let slope_mid = d01 + curv * (x1 - x0);
    let dx = -slope_mid / (2.0 * curv);
    let x = (x1 + dx).clamp(x0, x2);
    let dx = x - x1;
    let y = y1 + slope_mid * dx + curv * dx * dx;
    if y < y1 {
        (x, y)
    } else {
        (x1, y1)
    }
}

/// Golden-section refinement of a sampled minimum.
fn golden_refine<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    x_best: f64,
    f_best: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut xb, mut fb) = (x_best, f_best);
    for _ in 0..40 {
        if (b - a) <= 1e-10 * a.abs().max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if fc < fb {
            xb = c;
            fb = fc;
        }
        if fd < fb {
            xb = d;
            fb = fd;
        }
    }
    (xb, fb)
}

/// Aitken's Δ² extrapolation of the last three statistics, when well conditioned.
fn aitken(s: &[f64]) -> Option<f64> {
    let n = s.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (s[n - 3], s[n - 2], s[n - 1]);
    let den = (c - b) - (b - a);
    if den.abs() < 1e-300 {
        return None;
    }
    let v = c - (c - b) * (c - b) / den;
    // Only accept geometric, monotone convergence.
    let r = (c - b) / (b - a);
    if v.is_finite() && r > 0.0 && r < 0.95 {
        Some(v)
    } else {
        None
    }
}

fn fit_trend(kind: LimitKind, windows: Vec<WindowStat>, horizon: f64) -> AsymptoticEstimate {
    let s: Vec<f64> = windows.iter().map(|w| w.statistic).collect();
    let n = s.len();
    let last = s[n - 1];
    let tolerance = 1e-4f64.max(1e-3 * last.abs());
    let done = |value: f64, trend: Trend| AsymptoticEstimate {
        kind,
        value,
        trend,
        windows: windows.clone(),
        horizon,
        tolerance,
    };
    if s.iter().any(|v| !v.is_finite()) {
        return done(last, Trend::Undetermined);
    }
    let tail = &s[n - 3..];
    let converged = (tail[0] - tail[1]).abs() < tolerance
        && (tail[1] - tail[2]).abs() < tolerance
        && (tail[0] - tail[2]).abs() < tolerance;
    if converged {
        let value = match kind {
            LimitKind::Limit => aitken(&s)
                .filter(|v| (v - last).abs() < tolerance)
                .unwrap_or(last),
            _ => last,
        };
        return done(value, Trend::Converged);
    }
    let d: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    let up = d.iter().all(|&x| x > 0.0);
    let down = d.iter().all(|&x| x < 0.0);
    if up || down {
        // Per-window decay of the increments; windows are geometric with
        // ratio r, so t^{-p} convergence gives r^{-p} and log growth gives 1.
        let r = (windows[n - 1].end / windows[n - 1].start).max(1.0 + 1e-12);
        let rho = (d[d.len() - 1] / d[0])
            .abs()
            .powf(1.0 / (d.len() - 1).max(1) as f64);
        let threshold = r.powf(-0.25);
        if rho >= threshold {
            return if up {
                done(f64::INFINITY, Trend::DivergesUp)
            } else {
                done(f64::NEG_INFINITY, Trend::DivergesDown)
            };
        }
        let value = match kind {
            LimitKind::Limit => aitken(&s).unwrap_or(last),
            _ => last,
        };
        return done(value, Trend::Undetermined);
    }
    let value = match kind {
        LimitKind::LimInf => s.iter().cloned().fold(f64::INFINITY, f64::min),
        LimitKind::LimSup => s.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        LimitKind::Limit => s.iter().sum::<f64>() / n as f64,
    };
    done(value, Trend::Oscillating)
}
