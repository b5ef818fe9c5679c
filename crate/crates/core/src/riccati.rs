//! Scalar Riccati equations `y' + y² + a(t) y + b(t) = 0`.
//!
//! Solutions can only escape to `-∞` in finite time. The extremal initial
//! value `y*(t1)` separates initial values whose solutions survive to the
//! horizon from those that blow up; it is bracketed by bisection.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::CoefficientProfile;
use crate::error::{Error, Result};
use crate::ode::{self, Control, OdeOptions, Step};
use crate::quad::{
    cumulative_series, improper_exp_integral, integrate_split, integrate_vec, make_grid,
    Convergence, CumulativeTable, HermiteSeries, ImproperIntegral,
};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub const ESCAPE_THRESHOLD: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Direct,
    Shifted { lambda: f64 },
    General,
}

#[derive(Clone)]
enum Kind {
    Direct(CoefficientProfile),
    Shifted {
        profile: CoefficientProfile,
        lambda: f64,
    },
    General {
        a: RealFn,
        b: RealFn,
    },
}

#[derive(Clone)]
pub struct RiccatiProblem {
    t0: f64,
    kind: Kind,
}

impl fmt::Debug for RiccatiProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RiccatiProblem")
            .field("t0", &self.t0)
            .field("provenance", &self.provenance())
            .finish()
    }
}

/// `x = y + λ - Q1` turns `x' + x² + q = 0` into
/// `y' + y² + 2(λ - Q1) y + (λ - Q1)² = 0`.
pub fn shift(profile: &CoefficientProfile, lambda: f64) -> RiccatiProblem {
    RiccatiProblem {
        t0: profile.t0(),
        kind: Kind::Shifted {
            profile: profile.clone(),
            lambda,
        },
    }
}

impl RiccatiProblem {
    /// `x' + x² + q = 0`, the equation satisfied by `φ'/φ`.
    pub fn direct(profile: &CoefficientProfile) -> Self {
        Self {
            t0: profile.t0(),
            kind: Kind::Direct(profile.clone()),
        }
    }

    pub fn general<A, B>(t0: f64, a: A, b: B) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            t0,
            kind: Kind::General {
                a: Arc::new(a),
                b: Arc::new(b),
            },
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn provenance(&self) -> Provenance {
        match &self.kind {
            Kind::Direct(_) => Provenance::Direct,
            Kind::Shifted { lambda, .. } => Provenance::Shifted { lambda: *lambda },
            Kind::General { .. } => Provenance::General,
        }
    }

    fn q1_from_start(&self, p: &CoefficientProfile, t: f64) -> Result<f64> {
        let breaks = p.breakpoints(self.t0, t);
        Ok(integrate_split(|s| p.eval(s), self.t0, t, &breaks, Some(2.0), 1e-13)?.value)
    }

    /// `a(t)`; for shifted problems this integrates `q` from `t0`.
    pub fn a(&self, t: f64) -> Result<f64> {
        match &self.kind {
            Kind::Direct(_) => Ok(0.0),
            Kind::Shifted { profile, lambda } => {
                Ok(2.0 * (lambda - self.q1_from_start(profile, t)?))
            }
            Kind::General { a, .. } => Ok(a(t)),
        }
    }

    pub fn b(&self, t: f64) -> Result<f64> {
        match &self.kind {
            Kind::Direct(p) => p.eval(t),
            Kind::Shifted { profile, lambda } => {
                Ok((lambda - self.q1_from_start(profile, t)?).powi(2))
            }
            Kind::General { b, .. } => Ok(b(t)),
        }
    }

    /// Right-hand side on the augmented state `[y, Q1]`.
    fn rhs(&self, t: f64, s: &[f64; 2]) -> Result<[f64; 2]> {
        let y = s[0];
        match &self.kind {
            Kind::Direct(p) => Ok([-y * y - p.eval(t)?, 0.0]),
            Kind::Shifted { profile, lambda } => {
                let x = y + lambda - s[1];
                Ok([-x * x, profile.eval(t)?])
            }
            Kind::General { a, b } => Ok([-y * y - a(t) * y - b(t), 0.0]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiccatiOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub escape_threshold: f64,
    /// Width to which the blow-up time is refined.
    pub event_tol: f64,
    pub max_steps: usize,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-11,
            h_max: 1.0,
            escape_threshold: ESCAPE_THRESHOLD,
            event_tol: 1e-6,
            max_steps: 5_000_000,
        }
    }
}

/// A numerically integrated Riccati solution.
#[derive(Clone, Debug)]
pub struct RiccatiTrace {
    pub t1: f64,
    pub y0: f64,
    pub horizon: f64,
    /// Time at which `y` escaped to `-∞`, if it did before the horizon.
    pub blow_up: Option<f64>,
    pub provenance: Provenance,
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    /// `Q1` along the trace (shifted problems only).
    pub q1: Vec<f64>,
    pub q: Vec<f64>,
}

impl RiccatiTrace {
    pub fn end_time(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn y_series(&self) -> Result<HermiteSeries> {
        HermiteSeries::new(self.t.clone(), self.y.clone(), self.dy.clone())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,y")?;
        for (t, y) in self.t.iter().zip(&self.y) {
            writeln!(w, "{t},{y}")?;
        }
        Ok(())
    }
}

/// Integrates the problem from `(t1, y0)` to `horizon`, stopping at blow-up.
pub fn integrate(
    problem: &RiccatiProblem,
    y0: f64,
    t1: f64,
    horizon: f64,
    tol: f64,
) -> Result<RiccatiTrace> {
    let opts = RiccatiOptions {
        rtol: tol.min(1e-6),
        atol: tol.min(1e-6),
        ..Default::default()
    };
    integrate_with(problem, y0, t1, horizon, &opts)
}

pub fn integrate_with(
    problem: &RiccatiProblem,
    y0: f64,
    t1: f64,
    horizon: f64,
    opts: &RiccatiOptions,
) -> Result<RiccatiTrace> {
    if !(t1 >= problem.t0) {
        return Err(Error::InvalidInput(format!(
            "t1 = {t1} precedes the problem start {}",
            problem.t0
        )));
    }
    if !(horizon > t1) {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must exceed t1 = {t1}"
        )));
    }
    if !y0.is_finite() {
        return Err(Error::param("y0", "must be finite"));
    }
    let shifted = matches!(problem.kind, Kind::Shifted { .. });
    let aux0 = match &problem.kind {
        Kind::Shifted { profile, .. } if t1 > problem.t0 => problem.q1_from_start(profile, t1)?,
        _ => 0.0,
    };
    let thr = opts.escape_threshold;
    let first = problem.rhs(t1, &[y0, aux0])?;

    let mut trace = RiccatiTrace {
        t1,
        y0,
        horizon,
        blow_up: None,
        provenance: problem.provenance(),
        t: vec![t1],
        y: vec![y0],
        dy: vec![first[0]],
        q1: if shifted { vec![aux0] } else { Vec::new() },
        q: if shifted { vec![first[1]] } else { Vec::new() },
    };
    if y0 < -thr {
        trace.blow_up = Some(t1);
        return Ok(trace);
    }
    if y0 > thr {
        return Err(Error::UpperEscape { t: t1, y: y0 });
    }

    let ode_opts = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        h_max: opts.h_max,
        max_steps: opts.max_steps,
    };
    let mut escape: Option<Step<2>> = None;
    let mut upper: Option<(f64, f64)> = None;
    ode::integrate(
        |t, s: &[f64; 2]| problem.rhs(t, s),
        t1,
        [y0, aux0],
        horizon,
        &ode_opts,
        |step| {
            let y = step.y[0];
            if y < -thr {
                escape = Some(*step);
                return Ok(Control::Stop);
            }
            if y > thr {
                upper = Some((step.t, y));
                return Ok(Control::Stop);
            }
            trace.t.push(step.t);
            trace.y.push(y);
            trace.dy.push(step.dy[0]);
            if shifted {
                trace.q1.push(step.y[1]);
                trace.q.push(step.dy[1]);
            }
            Ok(Control::Continue)
        },
    )?;
    if let Some((t, y)) = upper {
        return Err(Error::UpperEscape { t, y });
    }
    if let Some(step) = escape {
        // Bisect the crossing of -threshold inside the escaping step.
        let mut rhs = |t: f64, s: &[f64; 2]| problem.rhs(t, s);
        let (mut lo, mut hi) = (0.0, step.t - step.t_prev);
        let tol = opts.event_tol.min(1e-6);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let (y_mid, _, _) =
                ode::trial_step(&mut rhs, step.t_prev, &step.y_prev, &step.dy_prev, mid)?;
            if y_mid[0] < -thr || !y_mid[0].is_finite() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // Beyond -threshold, y' ≈ -y² leaves about 1/threshold until the pole.
        trace.blow_up = Some(step.t_prev + hi + 1.0 / thr);
    }
    Ok(trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Nonnegative,
    Unresolved,
}

/// Finite-horizon bracket for the extremal initial value `y*(t1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalEstimate {
    pub t1: f64,
    pub horizon: f64,
    /// Blows up before the horizon.
    pub bracket_low: f64,
    /// Survives to the horizon.
    pub bracket_high: f64,
    pub width: f64,
    pub probes: usize,
}

impl ExtremalEstimate {
    /// Sign of `y*(t1)` resolved against the bracket width and the
    /// finite-horizon bias `≈ 1/(horizon - t1)`.
    pub fn measured_sign(&self) -> Sign {
        let slack = self.width.max(10.0 / (self.horizon - self.t1));
        if self.bracket_high < -slack {
            Sign::Negative
        } else if self.bracket_low >= -slack {
            Sign::Nonnegative
        } else {
            Sign::Unresolved
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtremalOutcome {
    Bracketed(ExtremalEstimate),
    /// Every scanned initial value blows up before the horizon.
    NoRegularSolution {
        scanned_up_to: f64,
        horizon: f64,
    },
}

impl ExtremalOutcome {
    pub fn estimate(&self) -> Option<&ExtremalEstimate> {
        match self {
            ExtremalOutcome::Bracketed(e) => Some(e),
            ExtremalOutcome::NoRegularSolution { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalOptions {
    /// The scan covers `±2^scan_exponent`.
    pub scan_exponent: u32,
    pub integration: RiccatiOptions,
    pub max_bisections: usize,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        Self {
            scan_exponent: 16,
            integration: RiccatiOptions::default(),
            max_bisections: 200,
        }
    }
}

pub fn extremal_initial_value(
    problem: &RiccatiProblem,
    t1: f64,
    horizon: f64,
    tol: f64,
) -> Result<ExtremalOutcome> {
    extremal_initial_value_with(problem, t1, horizon, tol, &ExtremalOptions::default())
}

pub fn extremal_initial_value_with(
    problem: &RiccatiProblem,
    t1: f64,
    horizon: f64,
    tol: f64,
    opts: &ExtremalOptions,
) -> Result<ExtremalOutcome> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let mut probes = 0usize;
    let mut survives = |y0: f64| -> Result<bool> {
        probes += 1;
        Ok(integrate_with(problem, y0, t1, horizon, &opts.integration)?
            .blow_up
            .is_none())
    };
    let limit = 2f64.powi(opts.scan_exponent as i32);
    let (mut lo, mut hi);
    if survives(0.0)? {
        hi = 0.0;
        let mut v = 1.0;
        loop {
            if !survives(-v)? {
                lo = -v;
                break;
            }
            hi = -v;
            if v >= limit {
                return Err(Error::BracketNotFound {
                    low: -limit,
                    high: 0.0,
                });
            }
            v *= 2.0;
        }
    } else {
        lo = 0.0;
        let mut v = 1.0;
        loop {
            if survives(v)? {
                hi = v;
                break;
            }
            lo = v;
            if v >= limit {
                return Ok(ExtremalOutcome::NoRegularSolution {
                    scanned_up_to: limit,
                    horizon,
                });
            }
            v *= 2.0;
        }
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < opts.max_bisections {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if survives(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(ExtremalOutcome::Bracketed(ExtremalEstimate {
        t1,
        horizon,
        bracket_low: lo,
        bracket_high: hi,
        width: hi - lo,
        probes,
    }))
}

/// Convergence evidence for `ν_y(t1) = ∫_{t1}^∞ exp{-∫_{t1}^τ (2y + a)} dτ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityOutcome {
    pub nu_partial: f64,
    pub integral: ImproperIntegral,
}

impl NormalityOutcome {
    pub fn classification(&self) -> Convergence {
        self.integral.classification
    }
}

pub fn normality_indicator(
    trace: &RiccatiTrace,
    problem: &RiccatiProblem,
    horizon: f64,
) -> Result<NormalityOutcome> {
    if let Some(tb) = trace.blow_up {
        return Err(Error::InvalidInput(format!(
            "the trace blows up at t = {tb}; normality needs a regular solution"
        )));
    }
    let horizon = horizon.min(trace.end_time());
    if !(horizon > trace.t1) {
        return Err(Error::InvalidInput(
            "horizon must exceed the trace start".into(),
        ));
    }
    let ys = trace.y_series()?;
    let q1s = match &problem.kind {
        Kind::Shifted { .. } => Some(HermiteSeries::new(
            trace.t.clone(),
            trace.q1.clone(),
            trace.q.clone(),
        )?),
        _ => None,
    };
    let a_at = |s: f64| -> f64 {
        match &problem.kind {
            Kind::Direct(_) => 0.0,
            Kind::Shifted { lambda, .. } => 2.0 * (lambda - q1s.as_ref().unwrap().eval(s)),
            Kind::General { a, .. } => a(s),
        }
    };
    let integrand = |s: f64| 2.0 * ys.eval(s) + a_at(s);
    let n = trace.t.len();
    let mut inner = Vec::with_capacity(n);
    let mut slopes = Vec::with_capacity(n);
    inner.push(0.0);
    let mut acc = 0.0;
    for i in 1..n {
        let (v, _) = integrate_vec::<1, _>(
            |s| Ok([integrand(s)]),
            trace.t[i - 1],
            trace.t[i],
            &[],
            None,
            1e-12,
        )?;
        acc += v[0];
        inner.push(-acc);
    }
    for i in 0..n {
        slopes.push(-(2.0 * trace.y[i] + a_at(trace.t[i])));
    }
    let exponent = HermiteSeries::new(trace.t.clone(), inner, slopes)?;
    let integral = improper_exp_integral(|t| exponent.eval(t), trace.t1, horizon)?;
    Ok(NormalityOutcome {
        nu_partial: integral.partial,
        integral,
    })
}

/// Residual of `y(t) = y(t1) - ∫_{t1}^t (y + λ - Q1)²` at every trace point
/// (shifted problems only); returns the largest absolute value.
pub fn integral_identity_residual(trace: &RiccatiTrace) -> Result<f64> {
    let lambda = match trace.provenance {
        Provenance::Shifted { lambda } => lambda,
        _ => {
            return Err(Error::InvalidInput(
                "the integral identity applies to shifted problems".into(),
            ))
        }
    };
    let ys = trace.y_series()?;
    let q1s = HermiteSeries::new(trace.t.clone(), trace.q1.clone(), trace.q.clone())?;
    let mut acc = 0.0;
    let mut worst: f64 = 0.0;
    for i in 1..trace.t.len() {
        let (v, _) = integrate_vec::<1, _>(
            |s| {
                let x = ys.eval(s) + lambda - q1s.eval(s);
                Ok([x * x])
            },
            trace.t[i - 1],
            trace.t[i],
            &[],
            None,
            1e-13,
        )?;
        acc += v[0];
        worst = worst.max((trace.y[i] - (trace.y0 - acc)).abs());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignPrediction {
    NegativeEventually,
    NonnegativeAlways,
    NotApplicable,
}

/// Predicts the sign of the extremal solution from `∫ exp{-2∫a}`.
pub fn lemma2_sign_prediction(problem: &RiccatiProblem, horizon: f64) -> Result<SignPrediction> {
    let t0 = problem.t0;
    if !(horizon > t0) {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must exceed t0 = {t0}"
        )));
    }
    let exponent: Box<dyn Fn(f64) -> f64> = match &problem.kind {
        Kind::Direct(p) => {
            if !nonnegative_on_grid(|t| p.eval(t), t0, horizon)? {
                return Ok(SignPrediction::NotApplicable);
            }
            Box::new(|_| 0.0)
        }
        Kind::Shifted { profile, lambda } => {
            let table = CumulativeTable::build(profile, horizon, 1e-12)?;
            let q2 = table.q2_series();
            let lambda = *lambda;
            Box::new(move |t| -4.0 * lambda * (t - t0) + 4.0 * q2.eval(t))
        }
        Kind::General { a, b } => {
            if !nonnegative_on_grid(|t| Ok(b(t)), t0, horizon)? {
                return Ok(SignPrediction::NotApplicable);
            }
            let span = horizon - t0;
            let grid = make_grid(t0, horizon, (span / 4096.0).min(0.25), &[]);
            let a = a.clone();
            let cum = cumulative_series(move |t| Ok(a(t)), grid, 1e-12)?;
            Box::new(move |t| -2.0 * cum.eval(t))
        }
    };
    let r = improper_exp_integral(&exponent, t0, horizon)?;
    Ok(match r.classification {
        Convergence::ConvergesLikely => SignPrediction::NegativeEventually,
        Convergence::DivergesLikely => SignPrediction::NonnegativeAlways,
        Convergence::Undetermined => SignPrediction::NotApplicable,
    })
}

fn nonnegative_on_grid<F: Fn(f64) -> Result<f64>>(b: F, a: f64, h: f64) -> Result<bool> {
    let n = 4096;
    for i in 0..=n {
        let t = a + (h - a) * i as f64 / n as f64;
        if b(t)? < 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn zero() -> RiccatiProblem {
        RiccatiProblem::general(0.0, |_| 0.0, |_| 0.0)
    }

    #[test]
    fn free_riccati_decays() {
        let tr = integrate(&zero(), 1.0, 0.0, 9.0, 1e-10).unwrap();
        assert!(tr.blow_up.is_none());
        assert!((tr.y.last().unwrap() - 0.1).abs() < 1e-8);
    }

    #[test]
    fn free_riccati_blows_up_at_one() {
        let tr = integrate(&zero(), -1.0, 0.0, 5.0, 1e-10).unwrap();
        let tb = tr.blow_up.unwrap();
        assert!((tb - 1.0).abs() < 1e-6, "{tb}");
    }

    #[test]
    fn tangent_blow_up() {
        let p = RiccatiProblem::direct(&CoefficientProfile::constant(1.0, 0.0).unwrap());
        let tr = integrate(&p, 0.0, 0.0, 5.0, 1e-10).unwrap();
        assert!((tr.blow_up.unwrap() - FRAC_PI_2).abs() < 1e-5);
    }

    #[test]
    fn shift_coefficients() {
        let z = CoefficientProfile::constant(0.0, 0.0).unwrap();
        let p = shift(&z, 0.0);
        assert_eq!(p.a(3.0).unwrap(), 0.0);
        assert_eq!(p.b(3.0).unwrap(), 0.0);
        let p = shift(&z, 1.0);
        assert_eq!(p.a(3.0).unwrap(), 2.0);
        assert_eq!(p.b(3.0).unwrap(), 1.0);
        let m = CoefficientProfile::mathieu(0.0, 2.0, 0.3).unwrap();
        let p = shift(&m, 0.0);
        let t = 0.3 + std::f64::consts::FRAC_PI_4;
        let a = -2.0 * ((2.0 * t).sin() - 0.6f64.sin());
        assert!((p.a(t).unwrap() - a).abs() < 1e-10);
        assert!((p.b(t).unwrap() - a * a / 4.0).abs() < 1e-10);
    }

    #[test]
    fn extremal_for_free_equation() {
        let e = extremal_initial_value(&zero(), 0.0, 1e3, 1e-6).unwrap();
        let e = e.estimate().unwrap();
        assert!(e.bracket_low < e.bracket_high);
        assert!(e.bracket_high <= 1e-2 && e.bracket_low >= -1e-2);
        assert_eq!(e.measured_sign(), Sign::Nonnegative);
    }

    #[test]
    fn extremal_for_negative_constant() {
        let p = RiccatiProblem::direct(&CoefficientProfile::constant(-1.0, 0.0).unwrap());
        let e = *extremal_initial_value(&p, 0.0, 50.0, 1e-6)
            .unwrap()
            .estimate()
            .unwrap();
        assert!((e.bracket_high + 1.0).abs() < 1e-3);
        assert_eq!(e.measured_sign(), Sign::Negative);
    }

    #[test]
    fn positive_constant_has_no_regular_solution() {
        let p = RiccatiProblem::direct(&CoefficientProfile::constant(1.0, 0.0).unwrap());
        let e = extremal_initial_value(&p, 0.0, 50.0, 1e-6).unwrap();
        assert!(matches!(e, ExtremalOutcome::NoRegularSolution { .. }));
    }

    #[test]
    fn normality_examples() {
        let z = RiccatiProblem::general(1.0, |_| 0.0, |_| 0.0);
        let tr = integrate(&z, 1.0, 1.0, 1e3, 1e-10).unwrap();
        let n = normality_indicator(&tr, &z, 1e3).unwrap();
        assert_eq!(n.classification(), Convergence::ConvergesLikely);
        assert!((n.nu_partial - (1.0 - 1e-3)).abs() < 1e-6);

        let tr = integrate(&z, 0.0, 1.0, 1e3, 1e-10).unwrap();
        let n = normality_indicator(&tr, &z, 1e3).unwrap();
        assert_eq!(n.classification(), Convergence::DivergesLikely);

        let p = RiccatiProblem::direct(&CoefficientProfile::constant(-1.0, 0.0).unwrap());
        let tr = integrate(&p, 1.0, 0.0, 50.0, 1e-10).unwrap();
        let n = normality_indicator(&tr, &p, 50.0).unwrap();
        assert_eq!(n.classification(), Convergence::ConvergesLikely);
        assert!((n.nu_partial - 0.5).abs() < 1e-8);
    }

    #[test]
    fn normality_rejects_blow_up() {
        let tr = integrate(&zero(), -1.0, 0.0, 5.0, 1e-10).unwrap();
        assert!(normality_indicator(&tr, &zero(), 5.0).is_err());
    }

    #[test]
    fn lemma2_predictions() {
        let z = CoefficientProfile::constant(0.0, 0.0).unwrap();
        assert_eq!(
            lemma2_sign_prediction(&shift(&z, 1.0), 50.0).unwrap(),
            SignPrediction::NegativeEventually
        );
        assert_eq!(
            lemma2_sign_prediction(&shift(&z, 0.0), 50.0).unwrap(),
            SignPrediction::NonnegativeAlways
        );
        let m = CoefficientProfile::mathieu(0.0, 1.0, 0.0).unwrap();
        assert_eq!(
            lemma2_sign_prediction(&RiccatiProblem::direct(&m), 50.0).unwrap(),
            SignPrediction::NotApplicable
        );
    }

    #[test]
    fn shifted_trace_satisfies_integral_identity() {
        let c = CoefficientProfile::constant(-1.0, 0.0).unwrap();
        let p = shift(&c, 0.5);
        let tr = integrate(&p, 2.0, 0.0, 20.0, 1e-10).unwrap();
        assert!(tr.blow_up.is_none(), "{:?} {:?}", tr.blow_up, &tr.y[..5]);
        let r = integral_identity_residual(&tr).unwrap();
        assert!(r < 1e-6, "{r}");
    }
}
