//! The Mathieu functional
//! `F_ε(μ) = -π|ε|μ / (4(π+μ)) + μ²/(π+μ) ∫_{-π/4}^{π/4} sin²2t / (1 + μ cos 2t) dt`
//! and its minimum `m(ε)` over `μ > 0`. Equations `φ'' + (δ + ε cos 2t) φ = 0`
//! with `δ > m(ε)` are oscillatory.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::coeff::corollary3_test_function;
use crate::error::{Error, Result};
use crate::quad::integrate_split;

pub const DEFAULT_TOL: f64 = 1e-12;

/// Upper end of the minimiser scan.
const MU_SCAN_MAX: f64 = 1e15;

fn check_args(epsilon: f64, mu: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon != 0.0) {
        return Err(Error::param("epsilon", "must be finite and nonzero"));
    }
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::param(
            "mu",
            format!("must be finite and nonnegative, got {mu}"),
        ));
    }
    Ok(())
}

/// `∫_{-π/4}^{π/4} sin²2t / (1 + μ cos 2t) dt` by quadrature.
///
/// After `x = 2t` this is `∫_0^{π/2} sin²x / (1 + μ cos x) dx`; the integrand
/// changes on the scale `1/μ` near `π/2`, so panels are graded there.
pub fn cap_integral(mu: f64, tol: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::param("mu", "must be nonnegative"));
    }
    let mut breaks = Vec::new();
    let mut w = 0.5;
    while w * mu > 0.25 && breaks.len() < 200 {
        breaks.push(FRAC_PI_2 - w);
        w *= 0.5;
    }
    let r = integrate_split(
        |x| {
            let s = x.sin();
            Ok(s * s / (1.0 + mu * x.cos()))
        },
        0.0,
        FRAC_PI_2,
        &breaks,
        None,
        tol,
    )?;
    Ok(r.value)
}

/// `F_ε(μ)` with the integral evaluated by adaptive quadrature.
pub fn functional(epsilon: f64, mu: f64, tol: f64) -> Result<f64> {
    check_args(epsilon, mu)?;
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let j = cap_integral(mu, tol)?;
    Ok(-PI * epsilon.abs() * mu / (4.0 * (PI + mu)) + mu * mu / (PI + mu) * j)
}

/// `μ²/(π+μ) · ∫ sin²2t / (1 + μ cos 2t)` in closed form.
pub fn cap_term_closed(mu: f64) -> f64 {
    let base = (PI - 2.0 * mu) / (2.0 * (PI + mu));
    if mu == 1.0 {
        return (PI - 2.0) / (2.0 * (PI + 1.0));
    }
    if mu < 1.0 {
        let s = (1.0 - mu * mu).sqrt();
        base - 2.0 * s / (PI + mu) * ((1.0 - mu) / (1.0 + mu)).sqrt().atan()
    } else {
        // ln[(√(μ+1) + √(μ-1)) / (√(μ+1) - √(μ-1))] = 2 artanh √((μ-1)/(μ+1))
        let s = (mu * mu - 1.0).sqrt();
        base + 2.0 * s / (PI + mu) * ((mu - 1.0) / (mu + 1.0)).sqrt().atanh()
    }
}

pub fn functional_closed(epsilon: f64, mu: f64) -> Result<f64> {
    check_args(epsilon, mu)?;
    Ok(-PI * epsilon.abs() * mu / (4.0 * (PI + mu)) + cap_term_closed(mu))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub mu_star: f64,
    pub m_eps: f64,
    /// Every evaluated `(μ, F)` pair, ascending in `μ`.
    pub samples: Vec<(f64, f64)>,
}

impl Minimum {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "mu,F")?;
        for (mu, f) in &self.samples {
            writeln!(w, "{mu},{f}")?;
        }
        Ok(())
    }
}

pub fn minimize(epsilon: f64, tol: f64) -> Result<Minimum> {
    minimize_with(epsilon, tol, 4)
}

/// Scans `μ = 0.01·2^{k/density}` until `F` turns positive, then refines the
/// best bracket by golden-section search to width `tol`.
pub fn minimize_with(epsilon: f64, tol: f64, density: u32) -> Result<Minimum> {
    check_args(epsilon, 0.0)?;
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let density = density.max(1);
    let qtol = DEFAULT_TOL;
    let f = |mu: f64| functional(epsilon, mu, qtol);
    let mut samples: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    let mut k = 0u32;
    loop {
        let mu = 0.01 * 2f64.powf(k as f64 / density as f64);
        if mu > MU_SCAN_MAX {
            let best =
                samples
                    .iter()
                    .cloned()
                    .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            return Err(Error::MinimumNotBracketed(format!(
                "F stayed negative up to μ = {MU_SCAN_MAX:e} (best F({}) = {})",
                best.0, best.1
            )));
        }
        let v = f(mu)?;
        samples.push((mu, v));
        if v > 0.0 {
            break;
        }
        k += 1;
    }
    let (ibest, _) = samples
        .iter()
        .enumerate()
        .skip(1)
        .fold(
            (1, f64::INFINITY),
            |acc, (i, s)| if s.1 < acc.1 { (i, s.1) } else { acc },
        );
    if samples[ibest].1 >= 0.0 {
        return Err(Error::MinimumNotBracketed(format!(
            "no negative value of F on the scan; first sample F({}) = {}",
            samples[1].0, samples[1].1
        )));
    }
    let (mut a, mut b) = (samples[ibest - 1].0, samples[ibest + 1].0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut refined = vec![(x1, f1), (x2, f2)];
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
            refined.push((x1, f1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
            refined.push((x2, f2));
        }
    }
    samples.extend(refined);
    samples.sort_by(|p, q| p.0.total_cmp(&q.0));
    samples.dedup_by(|p, q| p.0 == q.0);
    let (mu_star, m_eps) =
        samples.iter().cloned().fold(
            (f64::NAN, f64::INFINITY),
            |acc, s| if s.1 < acc.1 { s } else { acc },
        );
    Ok(Minimum {
        mu_star,
        m_eps,
        samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MathieuVerdict {
    OscillatoryByCorollary3,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MathieuAnalysis {
    pub epsilon: f64,
    pub delta: f64,
    pub mu_star: f64,
    pub m_eps: f64,
    pub f_samples: Vec<(f64, f64)>,
    pub verdict: MathieuVerdict,
    /// `δ - m(ε)`.
    pub margin: f64,
    pub tolerance: f64,
    /// Quarter-period integral with the weight `1 + μ* cos 2t`.
    pub ineq31_margin: f64,
    /// Full-period integral of `2gq - g'²/(2g)`, equal to `2(π+μ*)(δ - m(ε))`.
    pub period_margin: f64,
}

pub fn check_corollary3(delta: f64, epsilon: f64, tol: f64) -> Result<MathieuAnalysis> {
    if !delta.is_finite() {
        return Err(Error::param("delta", "must be finite"));
    }
    let min = minimize(epsilon, tol)?;
    let margin = delta - min.m_eps;
    let verdict = if margin > tol {
        MathieuVerdict::OscillatoryByCorollary3
    } else {
        MathieuVerdict::Inconclusive
    };
    Ok(MathieuAnalysis {
        epsilon,
        delta,
        mu_star: min.mu_star,
        m_eps: min.m_eps,
        verdict,
        margin,
        tolerance: tol,
        ineq31_margin: check_inequality31(delta, epsilon, min.mu_star)?,
        period_margin: period_margin(delta, epsilon, min.mu_star)?,
        f_samples: min.samples,
    })
}

/// `∫_{-π/4}^{π/4} [2g(δ + |ε| cos 2t) - g'²/g] dt` for `g = 1 + μ0 cos 2t`.
///
/// The sign of `ε` is absorbed by the shift `t ↦ t + π/2`.
pub fn check_inequality31(delta: f64, epsilon: f64, mu0: f64) -> Result<f64> {
    if !(mu0 > 0.0) {
        return Err(Error::param("mu0", "must be positive"));
    }
    let g = corollary3_test_function(mu0)?;
    let e = epsilon.abs();
    let r = integrate_split(
        |t| {
            let gv = g.eval_f(t);
            let dg = -2.0 * mu0 * (2.0 * t).sin();
            Ok(2.0 * gv * (delta + e * (2.0 * t).cos()) - dg * dg / gv)
        },
        -FRAC_PI_4,
        FRAC_PI_4,
        &[0.0],
        None,
        DEFAULT_TOL,
    )?;
    Ok(r.value)
}

/// `∫_{-π/4}^{3π/4} [2g(δ + |ε| cos 2t) - g'²/(2g)] dt` over one period of `g`.
pub fn period_margin(delta: f64, epsilon: f64, mu0: f64) -> Result<f64> {
    if !(mu0 > 0.0) {
        return Err(Error::param("mu0", "must be positive"));
    }
    let g = corollary3_test_function(mu0)?;
    let e = epsilon.abs();
    let r = integrate_split(
        |t| {
            let gv = g.eval_f(t);
            let dg = g.eval_df(t);
            Ok(2.0 * gv * (delta + e * (2.0 * t).cos()) - dg * dg / (2.0 * gv))
        },
        -FRAC_PI_4,
        3.0 * FRAC_PI_4,
        &[0.0, FRAC_PI_4],
        None,
        DEFAULT_TOL,
    )?;
    Ok(r.value)
}

/// One grid point of the comparison between the quarter-period margin and
/// `δ - F_ε(μ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgePoint {
    pub delta: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub ineq31_margin: f64,
    pub period_margin: f64,
    pub functional_gap: f64,
    /// Sign of the quarter-period margin differs from the sign of `δ - F`.
    pub quarter_disagrees: bool,
    /// `|period_margin - 2(π+μ)(δ - F)|`.
    pub identity_residual: f64,
}

pub fn bridge_report(deltas: &[f64], epsilons: &[f64], mus: &[f64]) -> Result<Vec<BridgePoint>> {
    let mut out = Vec::with_capacity(deltas.len() * epsilons.len() * mus.len());
    for &epsilon in epsilons {
        for &mu in mus {
            let f = functional(epsilon, mu, DEFAULT_TOL)?;
            for &delta in deltas {
                let m31 = check_inequality31(delta, epsilon, mu)?;
                let pm = period_margin(delta, epsilon, mu)?;
                let gap = delta - f;
                out.push(BridgePoint {
                    delta,
                    epsilon,
                    mu,
                    ineq31_margin: m31,
                    period_margin: pm,
                    functional_gap: gap,
                    quarter_disagrees: (m31 > 0.0) != (gap > 0.0),
                    identity_residual: (pm - 2.0 * (PI + mu) * gap).abs(),
                });
            }
        }
    }
    Ok(out)
}
