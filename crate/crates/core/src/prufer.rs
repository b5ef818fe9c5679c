//! Zero counting through the Prüfer angle `θ' = cos²θ + q sin²θ`.
//!
//! With `φ = r sin θ`, `φ' = r cos θ`, every zero of `φ` is a passage of `θ`
//! through a multiple of `π`, and there `θ' = 1`, so passages are upward.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::coeff::CoefficientProfile;
use crate::error::{Error, Result};
use crate::ode::{self, Control, OdeOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PruferOptions {
    pub tol: f64,
    pub h_max: f64,
    /// Co-integrate `ln r` with `(ln r)' = (1 - q) sin θ cos θ`.
    pub log_amplitude: bool,
    /// Keep the full `(t, θ)` trace; counting alone needs only the endpoint.
    pub keep_trace: bool,
    pub max_steps: usize,
}

impl Default for PruferOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            h_max: 1.0,
            log_amplitude: false,
            keep_trace: true,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruferTrace {
    pub t1: f64,
    pub theta0: f64,
    pub horizon: f64,
    pub zero_count: u64,
    pub theta_end: f64,
    #[serde(skip)]
    pub t: Vec<f64>,
    #[serde(skip)]
    pub theta: Vec<f64>,
    /// `ln r` along the trace when requested.
    #[serde(skip)]
    pub log_amplitude: Vec<f64>,
}

impl PruferTrace {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,theta")?;
        for (t, th) in self.t.iter().zip(&self.theta) {
            writeln!(w, "{t},{th}")?;
        }
        Ok(())
    }
}

pub fn count_zeros(
    profile: &CoefficientProfile,
    t1: f64,
    horizon: f64,
    theta0: f64,
) -> Result<PruferTrace> {
    count_zeros_with(profile, t1, horizon, theta0, &PruferOptions::default())
}

pub fn count_zeros_with(
    profile: &CoefficientProfile,
    t1: f64,
    horizon: f64,
    theta0: f64,
    opts: &PruferOptions,
) -> Result<PruferTrace> {
    if !(t1 >= profile.t0()) {
        return Err(Error::InvalidInput(format!(
            "t1 = {t1} precedes the profile start {}",
            profile.t0()
        )));
    }
    if !(horizon > t1) {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must exceed t1 = {t1}"
        )));
    }
    if !(0.0..std::f64::consts::PI).contains(&theta0) {
        return Err(Error::param("theta0", "must lie in [0, π)"));
    }
    if horizon > profile.domain_end() {
        return Err(Error::OutOfRange {
            t: horizon,
            lo: profile.t0(),
            hi: profile.domain_end(),
        });
    }
    let rhs = |t: f64, s: &[f64; 2]| -> Result<[f64; 2]> {
        let q = profile.eval(t)?;
        let (sn, cs) = s[0].sin_cos();
        Ok([cs * cs + q * sn * sn, (1.0 - q) * sn * cs])
    };
    let ode_opts = OdeOptions {
        rtol: opts.tol,
        atol: opts.tol,
        h_max: opts.h_max,
        max_steps: opts.max_steps,
    };
    let mut t = Vec::new();
    let mut theta = Vec::new();
    let mut log_r = Vec::new();
    if opts.keep_trace {
        t.push(t1);
        theta.push(theta0);
        if opts.log_amplitude {
            log_r.push(0.0);
        }
    }
    let out = ode::integrate(rhs, t1, [theta0, 0.0], horizon, &ode_opts, |step| {
        if opts.keep_trace {
            t.push(step.t);
            theta.push(step.y[0]);
            if opts.log_amplitude {
                log_r.push(step.y[1]);
            }
        }
        Ok(Control::Continue)
    })?;
    let theta_end = out.y[0];
    let zero_count = if theta_end >= std::f64::consts::PI {
        (theta_end / std::f64::consts::PI).floor() as u64
    } else {
        0
    };
    Ok(PruferTrace {
        t1,
        theta0,
        horizon,
        zero_count,
        theta_end,
        t,
        theta,
        log_amplitude: log_r,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillationVerdict {
    GrowingZeros,
    Stalled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationEvidence {
    pub horizons: Vec<f64>,
    pub counts: Vec<u64>,
    pub verdict: OscillationVerdict,
    /// First pair of consecutive horizons without a new zero.
    pub stall: Option<(f64, f64)>,
}

/// Counts zeros from `(t0, θ0 = 0)` up to each horizon.
pub fn oscillation_evidence(
    profile: &CoefficientProfile,
    horizons: &[f64],
) -> Result<OscillationEvidence> {
    if horizons.len() < 3 {
        return Err(Error::InvalidInput(
            "at least three horizons are required".into(),
        ));
    }
    if horizons.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "horizons must be strictly increasing".into(),
        ));
    }
    let opts = PruferOptions {
        keep_trace: false,
        ..Default::default()
    };
    // One pass to the last horizon, restarting the reduced phase at each one.
    let t0 = profile.t0();
    let mut counts = Vec::with_capacity(horizons.len());
    let mut theta = 0.0;
    let mut start = t0;
    for &h in horizons {
        let reduced = theta % std::f64::consts::PI;
        let base = theta - reduced;
        let tr = count_zeros_with(profile, start, h, reduced, &opts)?;
        theta = base + tr.theta_end;
        let c = (theta / std::f64::consts::PI).floor().max(0.0) as u64;
        counts.push(c);
        start = h;
    }
    let stall = horizons
        .windows(2)
        .zip(counts.windows(2))
        .find(|(_, c)| c[1] <= c[0])
        .map(|(h, _)| (h[0], h[1]));
    Ok(OscillationEvidence {
        horizons: horizons.to_vec(),
        counts,
        verdict: if stall.is_none() {
            OscillationVerdict::GrowingZeros
        } else {
            OscillationVerdict::Stalled
        },
        stall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn constant(v: f64) -> CoefficientProfile {
        CoefficientProfile::constant(v, 0.0).unwrap()
    }

    #[test]
    fn unit_frequency_counts() {
        let tr = count_zeros(&constant(1.0), 0.0, 100.0, 0.0).unwrap();
        assert_eq!(tr.zero_count, 31);
        assert!((tr.theta_end - 100.0).abs() < 1e-8);
    }

    #[test]
    fn free_equation_from_quarter_turn() {
        let tr = count_zeros(&constant(0.0), 0.0, 100.0, FRAC_PI_2).unwrap();
        assert_eq!(tr.zero_count, 0);
    }

    #[test]
    fn harmonic_counts_are_exact() {
        for w in [0.5f64, 1.0, 2.0, 5.0] {
            let t_end = 60.0;
            let tr = count_zeros(&constant(w * w), 0.0, t_end, 0.0).unwrap();
            let expected = (w * t_end / PI).floor() as i64;
            assert!((tr.zero_count as i64 - expected).abs() <= 1, "ω = {w}");
        }
    }

    #[test]
    fn rejects_bad_phase() {
        assert!(count_zeros(&constant(1.0), 0.0, 10.0, PI).is_err());
        assert!(count_zeros(&constant(1.0), 0.0, 10.0, -0.1).is_err());
    }

    #[test]
    fn evidence_verdicts() {
        let e = oscillation_evidence(&constant(1.0), &[50.0, 100.0, 150.0]).unwrap();
        assert_eq!(e.verdict, OscillationVerdict::GrowingZeros);
        assert_eq!(e.counts, vec![15, 31, 47]);
        let e = oscillation_evidence(&constant(-1.0), &[50.0, 100.0, 150.0]).unwrap();
        assert_eq!(e.verdict, OscillationVerdict::Stalled);
        assert!(e.counts.iter().all(|&c| c <= 1));
        assert_eq!(e.stall, Some((50.0, 100.0)));
    }

    #[test]
    fn amplitude_is_constant_for_unit_frequency() {
        let opts = PruferOptions {
            log_amplitude: true,
            ..Default::default()
        };
        let tr = count_zeros_with(&constant(1.0), 0.0, 20.0, 0.3, &opts).unwrap();
        assert!(tr.log_amplitude.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn csv_export() {
        let tr = count_zeros(&constant(1.0), 0.0, 3.0, 0.0).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("t,theta\n0,0\n"));
        assert_eq!(s.lines().count(), tr.t.len() + 1);
    }
}
