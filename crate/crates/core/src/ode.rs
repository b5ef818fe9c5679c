//! Dormand-Prince 5(4) integration of small fixed-size systems.

use crate::error::{Error, Result};

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 1.0 / 5.0;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// Difference between the 5th and embedded 4th order weights (last entry for the FSAL stage).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            h_max: f64::INFINITY,
            max_steps: 10_000_000,
        }
    }
}

/// One accepted step, with derivatives at both ends for Hermite interpolation.
#[derive(Clone, Copy, Debug)]
pub struct Step<const N: usize> {
    pub t_prev: f64,
    pub y_prev: [f64; N],
    pub dy_prev: [f64; N],
    pub t: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
    pub stopped: bool,
}

/// Result of a single trial step: 5th-order solution, error estimate, derivative at the end.
pub fn trial_step<const N: usize, F>(
    rhs: &mut F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Result<([f64; N], [f64; N], [f64; N])>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let comb = |ks: &[&[f64; N]], w: &[f64]| {
        let mut out = *y;
        for i in 0..N {
            let mut acc = 0.0;
            for (k, &wj) in ks.iter().zip(w) {
                acc += wj * k[i];
            }
            out[i] += h * acc;
        }
        out
    };
    let k2 = rhs(t + C[0] * h, &comb(&[k1], &[A21]))?;
    let k3 = rhs(t + C[1] * h, &comb(&[k1, &k2], &A3))?;
    let k4 = rhs(t + C[2] * h, &comb(&[k1, &k2, &k3], &A4))?;
    let k5 = rhs(t + C[3] * h, &comb(&[k1, &k2, &k3, &k4], &A5))?;
    let k6 = rhs(t + C[4] * h, &comb(&[k1, &k2, &k3, &k4, &k5], &A6))?;
    let y_new = comb(&[k1, &k2, &k3, &k4, &k5, &k6], &B);
    let k7 = rhs(t + h, &y_new)?;
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h
            * (E[0] * k1[i]
                + E[2] * k3[i]
                + E[3] * k4[i]
                + E[4] * k5[i]
                + E[5] * k6[i]
                + E[6] * k7[i]);
    }
    Ok((y_new, err, k7))
}

fn error_norm<const N: usize>(
    err: &[f64; N],
    y0: &[f64; N],
    y1: &[f64; N],
    opts: &OdeOptions,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end`, calling `observer` after
/// every accepted step. The observer may stop the integration early.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<Outcome<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    O: FnMut(&Step<N>) -> Result<Control>,
{
    if !(t_end > t0) {
        return Err(Error::InvalidInput(format!(
            "t_end = {t_end} must exceed t0 = {t0}"
        )));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y)?;
    let h_max = opts.h_max.min(t_end - t0);

    // Initial step size (Hairer, Nørsett & Wanner II.4).
    let mut h = {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = opts.atol + opts.rtol * y[i].abs();
            d0 += (y[i] / sc).powi(2);
            d1 += (k1[i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h0.min(h_max).max(1e-12 * t.abs().max(1.0))
    };

    let mut steps = 0usize;
    let mut rejected_last = false;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::StepBudget { t, steps });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let (y_new, err, k7) = trial_step(&mut rhs, t, &y, &k1, h)?;
        let en = error_norm(&err, &y, &y_new, opts);
        if !en.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            rejected_last = true;
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Stiffness { t });
            }
            continue;
        }
        if en <= 1.0 {
            let t_new = if last { t_end } else { t + h };
            steps += 1;
            let step = Step {
                t_prev: t,
                y_prev: y,
                dy_prev: k1,
                t: t_new,
                y: y_new,
                dy: k7,
            };
            t = t_new;
            y = y_new;
            k1 = k7;
            if observer(&step)? == Control::Stop {
                return Ok(Outcome {
                    t,
                    y,
                    steps,
                    stopped: true,
                });
            }
            let mut factor = if en == 0.0 { 5.0 } else { 0.9 * en.powf(-0.2) };
            factor = factor.clamp(0.2, 5.0);
            if rejected_last {
                factor = factor.min(1.0);
            }
            h = (h * factor).min(h_max);
            rejected_last = false;
        } else {
            let factor = (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
            h *= factor;
            rejected_last = true;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Stiffness { t });
        }
    }
    Ok(Outcome {
        t,
        y,
        steps,
        stopped: false,
    })
}

/// Cubic Hermite interpolation inside one accepted step.
pub fn hermite<const N: usize>(step: &Step<N>, t: f64) -> [f64; N] {
    let h = step.t - step.t_prev;
    let s = (t - step.t_prev) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = h00 * step.y_prev[i]
            + h * h10 * step.dy_prev[i]
            + h01 * step.y[i]
            + h * h11 * step.dy[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let out = integrate(
            |_, y: &[f64; 1]| Ok([-y[0]]),
            0.0,
            [1.0],
            5.0,
            &OdeOptions::default(),
            |_| Ok(Control::Continue),
        )
        .unwrap();
        assert!((out.y[0] - (-5f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_long_run() {
        let opts = OdeOptions {
            rtol: 1e-12,
            atol: 1e-12,
            ..Default::default()
        };
        let out = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            100.0,
            &opts,
            |_| Ok(Control::Continue),
        )
        .unwrap();
        assert!((out.y[0] - 100f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn observer_can_stop() {
        let out = integrate(
            |_, _: &[f64; 1]| Ok([1.0]),
            0.0,
            [0.0],
            10.0,
            &OdeOptions {
                h_max: 0.5,
                ..Default::default()
            },
            |s| {
                Ok(if s.y[0] > 2.0 {
                    Control::Stop
                } else {
                    Control::Continue
                })
            },
        )
        .unwrap();
        assert!(out.stopped);
        assert!(out.t > 2.0 && out.t <= 2.5 + 1e-12);
    }

    #[test]
    fn step_budget_is_enforced() {
        let opts = OdeOptions {
            h_max: 1e-3,
            max_steps: 10,
            ..Default::default()
        };
        let r = integrate(
            |_, _: &[f64; 1]| Ok([0.0]),
            0.0,
            [0.0],
            1.0,
            &opts,
            |_| Ok(Control::Continue),
        );
        assert!(matches!(r, Err(Error::StepBudget { .. })));
    }
}
