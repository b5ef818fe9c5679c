//! Convergence classification of `∫_{t_start}^∞ exp{E(t)} dt` from finite data.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::gauss_kronrod::integrate_split;
use crate::error::{Error, Result};
use crate::serde_ext::f64_ext;

/// Exponents above this value are treated as overflow.
pub const EXP_SATURATION: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convergence {
    ConvergesLikely,
    DivergesLikely,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImproperIntegral {
    /// `P(horizon)`; `inf` when saturated.
    #[serde(with = "f64_ext")]
    pub partial: f64,
    #[serde(with = "f64_ext")]
    pub log_partial: f64,
    pub classification: Convergence,
    /// `I_{k+1}/I_k` for consecutive doubling increments.
    pub ratios: Vec<f64>,
    pub horizons: Vec<f64>,
    pub saturated: bool,
}

impl ImproperIntegral {
    /// Largest of the last four increment ratios (∞ when saturated).
    pub fn max_recent_ratio(&self) -> f64 {
        if self.saturated {
            return f64::INFINITY;
        }
        recent(&self.ratios)
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest of the last four increment ratios (∞ when saturated).
    pub fn min_recent_ratio(&self) -> f64 {
        if self.saturated {
            return f64::INFINITY;
        }
        recent(&self.ratios)
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

fn recent(r: &[f64]) -> &[f64] {
    &r[r.len().saturating_sub(4)..]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImproperOptions {
    /// Number of doublings of the span from `t_start`.
    pub levels: usize,
    /// Relative accuracy of each increment.
    pub rel_tol: f64,
    /// Largest initial quadrature panel.
    pub max_panel: f64,
}

impl Default for ImproperOptions {
    fn default() -> Self {
        Self {
            levels: 10,
            rel_tol: 1e-10,
            max_panel: 1.0,
        }
    }
}

pub fn improper_exp_integral<E>(exponent: E, t_start: f64, horizon: f64) -> Result<ImproperIntegral>
where
    E: Fn(f64) -> f64,
{
    improper_exp_integral_with(exponent, t_start, horizon, ImproperOptions::default())
}

/// Integrates `exp{E}` over `[t_start, T_k]` for `T_k = t_start + L·2^{k-K}`
/// in log space and inspects the ratios of consecutive increments.
pub fn improper_exp_integral_with<E>(
    exponent: E,
    t_start: f64,
    horizon: f64,
    opts: ImproperOptions,
) -> Result<ImproperIntegral>
where
    E: Fn(f64) -> f64,
{
    if !(horizon > t_start) {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must exceed the start {t_start}"
        )));
    }
    let levels = opts.levels.max(5);
    let span = horizon - t_start;
    let horizons: Vec<f64> = (0..=levels)
        .map(|k| {
            if k == levels {
                horizon
            } else {
                t_start + span * 0.5f64.powi((levels - k) as i32)
            }
        })
        .collect();

    let mut saturated = false;
    let mut logs = Vec::with_capacity(levels + 1);
    let mut a = t_start;
    for &b in &horizons {
        let (log_i, sat) = log_segment(&exponent, a, b, &opts)?;
        saturated |= sat;
        logs.push(log_i);
        a = b;
    }
    let log_partial = log_sum_exp(&logs);
    let ratios: Vec<f64> = logs[1..].windows(2).map(|w| (w[1] - w[0]).exp()).collect();

    let tail = recent(&ratios);
    let classification = if saturated || tail.iter().all(|&r| r >= 0.98) {
        Convergence::DivergesLikely
    } else if tail.iter().all(|&r| r < 0.9) {
        Convergence::ConvergesLikely
    } else {
        Convergence::Undetermined
    };
    let partial = if saturated {
        f64::INFINITY
    } else {
        log_partial.exp()
    };
    Ok(ImproperIntegral {
        partial,
        log_partial: if saturated {
            f64::INFINITY
        } else {
            log_partial
        },
        classification,
        ratios,
        horizons,
        saturated,
    })
}

/// `ln ∫_a^b exp{E}` and whether the exponent exceeded the saturation level.
fn log_segment<E: Fn(f64) -> f64>(
    exponent: &E,
    a: f64,
    b: f64,
    opts: &ImproperOptions,
) -> Result<(f64, bool)> {
    let len = b - a;
    let n = ((len / 0.25).ceil() as usize).clamp(256, 1 << 20);
    let mut shift = f64::NEG_INFINITY;
    for i in 0..=n {
        let t = a + len * i as f64 / n as f64;
        let e = exponent(t);
        if e.is_nan() {
            return Err(Error::NonFinite { t });
        }
        shift = shift.max(e);
    }
    if shift > EXP_SATURATION {
        return Ok((f64::INFINITY, true));
    }
    if shift == f64::NEG_INFINITY {
        return Ok((f64::NEG_INFINITY, false));
    }
    let peak = Cell::new(shift);
    let integrand = |t: f64| {
        let e = exponent(t);
        if e.is_nan() {
            return Err(Error::NonFinite { t });
        }
        if e > peak.get() {
            peak.set(e);
        }
        Ok((e - shift).min(EXP_SATURATION).exp())
    };
    let panel = opts.max_panel.min(len / 16.0).max(len * 1e-6);
    // Absolute tolerance relative to the sampled peak value exp(0) = 1.
    let r = integrate_split(integrand, a, b, &[], Some(panel), opts.rel_tol)?;
    if peak.get() > EXP_SATURATION {
        return Ok((f64::INFINITY, true));
    }
    if !(r.value > 0.0) {
        return Ok((f64::NEG_INFINITY, false));
    }
    Ok((shift + r.value.ln(), false))
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decaying_exponential_converges() {
        let r = improper_exp_integral(|t| -t, 0.0, 100.0).unwrap();
        assert_eq!(r.classification, Convergence::ConvergesLikely);
        assert!((r.partial - (1.0 - (-100f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn flat_integrand_diverges() {
        let r = improper_exp_integral(|_| 0.0, 2.0, 50.0).unwrap();
        assert_eq!(r.classification, Convergence::DivergesLikely);
        assert!((r.partial - 48.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_square_converges() {
        let r = improper_exp_integral(|t| -2.0 * t.ln(), 1.0, 1e4).unwrap();
        assert_eq!(r.classification, Convergence::ConvergesLikely);
        assert!((r.partial - (1.0 - 1e-4)).abs() < 1e-8);
    }

    #[test]
    fn overflow_saturates() {
        let r = improper_exp_integral(|t| t * t, 0.0, 100.0).unwrap();
        assert!(r.saturated);
        assert_eq!(r.classification, Convergence::DivergesLikely);
        assert_eq!(r.partial, f64::INFINITY);
    }

    #[test]
    fn very_negative_exponents_stay_finite() {
        let r = improper_exp_integral(|t| -1000.0 - t, 0.0, 100.0).unwrap();
        assert_eq!(r.classification, Convergence::ConvergesLikely);
        assert!((r.log_partial + 1000.0).abs() < 1e-9);
    }
}
