use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    PowerCosine,
    LogStack,
    Mathieu,
    Constant,
    Tabulated,
    Custom,
}

/// Serializable description of a profile's parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    PowerCosine {
        alpha0: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    LogStack {
        epsilon: f64,
        alpha: f64,
        beta: f64,
        r: u32,
    },
    Mathieu {
        delta: f64,
        epsilon: f64,
    },
    Constant {
        value: f64,
    },
    Tabulated {
        samples: usize,
        first: f64,
        last: f64,
    },
    Custom {
        name: String,
    },
}

/// Behaviour of the Cesàro mean `(1/t) ∫∫ q` as `t → ∞`, when known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CesaroLimit {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

/// Tail integral `∫_t^∞ q` with a half-width band for the part that is only
/// known to be bounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailValue {
    pub value: f64,
    pub band: f64,
}

#[derive(Clone)]
enum Shape {
    PowerCosine {
        alpha0: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    LogStack {
        epsilon: f64,
        alpha: f64,
        beta: f64,
        r: u32,
    },
    Mathieu {
        delta: f64,
        epsilon: f64,
    },
    Constant {
        value: f64,
    },
    Tabulated {
        t: Vec<f64>,
        q: Vec<f64>,
    },
    Interleaved,
    Custom {
        name: String,
        f: CustomFn,
    },
}

/// A coefficient `q(t)` of `φ'' + q φ = 0` on `[t0, ∞)`.
///
/// Cloning is cheap; the underlying data is shared and immutable.
#[derive(Clone)]
pub struct CoefficientProfile {
    t0: f64,
    shape: Arc<Shape>,
}

impl fmt::Debug for CoefficientProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientProfile")
            .field("t0", &self.t0)
            .field("params", &self.params())
            .finish()
    }
}

/// Smallest `t` with `ln_r t > 0`, i.e. `exp` iterated `r - 1` times on 1.
pub fn log_stack_threshold(r: u32) -> f64 {
    let mut x = 1.0f64;
    for _ in 1..r {
        x = x.exp();
    }
    x
}

impl CoefficientProfile {
    fn new(t0: f64, shape: Shape) -> Self {
        Self {
            t0,
            shape: Arc::new(shape),
        }
    }

    /// `q(t) = α0/t² + α cos(βt)/t^γ`.
    pub fn power_cosine(alpha0: f64, alpha: f64, beta: f64, gamma: f64, t0: f64) -> Result<Self> {
        finite("alpha0", alpha0)?;
        finite("alpha", alpha)?;
        if !(beta.is_finite() && beta != 0.0) {
            return Err(Error::param("beta", "must be finite and nonzero"));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::param(
                "gamma",
                format!("must be positive, got {gamma}"),
            ));
        }
        if !(t0.is_finite() && t0 > 0.0) {
            return Err(Error::param("t0", format!("must be positive, got {t0}")));
        }
        Ok(Self::new(
            t0,
            Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            },
        ))
    }

    /// `q(t) = Σ_{k<r} 1/(4t² ln t … ln_k t) + (1+ε)/(4t² ln t … ln_r t) + α sin(βt)/(t ln t)`.
    pub fn log_stack(epsilon: f64, alpha: f64, beta: f64, r: u32, t0: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::param(
                "epsilon",
                format!("must be positive, got {epsilon}"),
            ));
        }
        finite("alpha", alpha)?;
        if !(beta.is_finite() && beta != 0.0) {
            return Err(Error::param("beta", "must be finite and nonzero"));
        }
        if r == 0 || r > 4 {
            return Err(Error::param("r", format!("must be in 1..=4, got {r}")));
        }
        let min_t0 = log_stack_threshold(r);
        if !(t0.is_finite() && t0 > min_t0) {
            return Err(Error::Domain { t0, min_t0 });
        }
        Ok(Self::new(
            t0,
            Shape::LogStack {
                epsilon,
                alpha,
                beta,
                r,
            },
        ))
    }

    /// `q(t) = δ + ε cos 2t`.
    pub fn mathieu(delta: f64, epsilon: f64, t0: f64) -> Result<Self> {
        finite("delta", delta)?;
        finite("t0", t0)?;
        if !(epsilon.is_finite() && epsilon != 0.0) {
            return Err(Error::param(
                "epsilon",
                "must be finite and nonzero (use the constant family otherwise)",
            ));
        }
        Ok(Self::new(t0, Shape::Mathieu { delta, epsilon }))
    }

    pub fn constant(value: f64, t0: f64) -> Result<Self> {
        finite("value", value)?;
        finite("t0", t0)?;
        Ok(Self::new(t0, Shape::Constant { value }))
    }

    /// Piecewise-linear interpolation of `(t, q)` samples; `t0` is the first abscissa.
    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput(
                "a tabulated profile needs at least two samples".into(),
            ));
        }
        for (i, &(t, q)) in samples.iter().enumerate() {
            if !t.is_finite() || !q.is_finite() {
                return Err(Error::InvalidInput(format!("sample {i} is not finite")));
            }
        }
        if let Some(i) = samples.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidInput(format!(
                "abscissae must be strictly increasing (samples {} and {})",
                i,
                i + 1
            )));
        }
        let (t, q) = samples.iter().copied().unzip();
        Ok(Self::new(samples[0].0, Shape::Tabulated { t, q }))
    }

    /// Coefficient whose iterated integral is `t sin³t` where `sin t ≥ 0` and
    /// `t² sin³t` elsewhere (up to an affine correction when `sin t0 ≠ 0`).
    /// The Cesàro mean has `liminf = -∞` and a finite `limsup`.
    pub fn interleaved_cubic(t0: f64) -> Result<Self> {
        if !(t0.is_finite() && t0 >= 0.0) {
            return Err(Error::param("t0", format!("must be nonnegative, got {t0}")));
        }
        Ok(Self::new(t0, Shape::Interleaved))
    }

    pub fn custom<F>(name: impl Into<String>, t0: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        finite("t0", t0)?;
        Ok(Self::new(
            t0,
            Shape::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        ))
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn family_tag(&self) -> FamilyTag {
        match &*self.shape {
            Shape::PowerCosine { .. } => FamilyTag::PowerCosine,
            Shape::LogStack { .. } => FamilyTag::LogStack,
            Shape::Mathieu { .. } => FamilyTag::Mathieu,
            Shape::Constant { .. } => FamilyTag::Constant,
            Shape::Tabulated { .. } => FamilyTag::Tabulated,
            Shape::Interleaved | Shape::Custom { .. } => FamilyTag::Custom,
        }
    }

    pub fn params(&self) -> FamilyParams {
        match &*self.shape {
            &Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            } => FamilyParams::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            },
            &Shape::LogStack {
                epsilon,
                alpha,
                beta,
                r,
            } => FamilyParams::LogStack {
                epsilon,
                alpha,
                beta,
                r,
            },
            &Shape::Mathieu { delta, epsilon } => FamilyParams::Mathieu { delta, epsilon },
            &Shape::Constant { value } => FamilyParams::Constant { value },
            Shape::Tabulated { t, .. } => FamilyParams::Tabulated {
                samples: t.len(),
                first: t[0],
                last: t[t.len() - 1],
            },
            Shape::Interleaved => FamilyParams::Custom {
                name: "interleaved-cubic".into(),
            },
            Shape::Custom { name, .. } => FamilyParams::Custom { name: name.clone() },
        }
    }

    /// Largest `t` at which the profile can be evaluated.
    pub fn domain_end(&self) -> f64 {
        match &*self.shape {
            Shape::Tabulated { t, .. } => t[t.len() - 1],
            _ => f64::INFINITY,
        }
    }

    /// Evaluates `q(t)`. Non-finite results are reported as errors.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match &*self.shape {
            &Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            } => alpha0 / (t * t) + alpha * (beta * t).cos() / t.powf(gamma),
            &Shape::LogStack {
                epsilon,
                alpha,
                beta,
                r,
            } => {
                1.0 / (4.0 * t * t)
                    + log_stack_smooth(t, epsilon, r)
                    + alpha * (beta * t).sin() / (t * t.ln())
            }
            &Shape::Mathieu { delta, epsilon } => delta + epsilon * (2.0 * t).cos(),
            &Shape::Constant { value } => value,
            Shape::Tabulated { t: ts, q } => interpolate(ts, q, t)?,
            Shape::Interleaved => interleaved_q(t),
            Shape::Custom { f, .. } => f(t),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { t })
        }
    }

    /// Points in `(a, b)` where `q` is not smooth; quadrature panels never straddle them.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        match &*self.shape {
            Shape::Tabulated { t, .. } => t.iter().copied().filter(|&x| x > a && x < b).collect(),
            Shape::Interleaved => {
                let mut out = Vec::new();
                let mut k = (a / PI).floor() as i64;
                loop {
                    let x = k as f64 * PI;
                    if x >= b {
                        break;
                    }
                    if x > a {
                        out.push(x);
                    }
                    k += 1;
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Exact `∫_t^∞ q`, or an asymptotic expansion with an error band.
    pub fn tail_integral(&self, t: f64) -> Option<TailValue> {
        match *self.shape {
            Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            } => {
                if alpha == 0.0 {
                    return Some(TailValue {
                        value: alpha0 / t,
                        band: 0.0,
                    });
                }
                // Integrating by parts once: the remainder is
                // -αγ/β ∫ sin(βs)/s^{γ+1}, bounded by |α|/|β| · t^{-γ}
                // and, after a second integration by parts, by 2|α|γ/β² · t^{-γ-1}.
                let value = alpha0 / t - alpha * (beta * t).sin() / (beta * t.powf(gamma));
                let band = 2.0 * alpha.abs() * gamma / (beta * beta) / t.powf(gamma + 1.0);
                Some(TailValue { value, band })
            }
            Shape::LogStack {
                epsilon,
                alpha,
                beta,
                r,
            } => {
                // Smooth part with s = t/u; the integrand is bounded on (0, 1].
                let smooth = crate::quad::integrate(
                    |u| Ok(log_stack_smooth(t / u, epsilon, r) * t / (u * u)),
                    0.0,
                    1.0,
                    1e-16,
                )
                .ok()?;
                // Oscillatory part with g = 1/(s ln s), integrated by parts twice;
                // g'' > 0 decreases, so the remainder is at most 2|α| g''(t)/|β|³.
                let l = t.ln();
                let g = 1.0 / (t * l);
                let dg = -(l + 1.0) / (t * t * l * l);
                let ddg = (2.0 * (l + 1.0).powi(2) - l) / (t.powi(3) * l.powi(3));
                let (sn, cs) = (beta * t).sin_cos();
                let osc = alpha * (cs * g / beta - sn * dg / (beta * beta));
                let band = 2.0 * alpha.abs() * ddg / beta.abs().powi(3) + smooth.error;
                Some(TailValue {
                    value: 1.0 / (4.0 * t) + smooth.value + osc,
                    band,
                })
            }
            Shape::Constant { value } => Some(TailValue {
                value: if value > 0.0 {
                    f64::INFINITY
                } else if value < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    0.0
                },
                band: 0.0,
            }),
            _ => None,
        }
    }

    /// Exact `Q1(t) = ∫_{t0}^t q`.
    pub fn cumulative_exact(&self, t: f64) -> Option<f64> {
        let t0 = self.t0;
        match &*self.shape {
            &Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            } if alpha == 0.0 || gamma == 1.0 => {
                let power = alpha0 * (1.0 / t0 - 1.0 / t);
                if alpha == 0.0 {
                    return Some(power);
                }
                Some(power + alpha * (cos_integral(beta.abs() * t) - cos_integral(beta.abs() * t0)))
            }
            &Shape::Mathieu { delta, epsilon } => {
                Some(delta * (t - t0) + 0.5 * epsilon * ((2.0 * t).sin() - (2.0 * t0).sin()))
            }
            &Shape::Constant { value } => Some(value * (t - t0)),
            Shape::Interleaved => {
                let (_, d1, _) = interleaved_q2(t0);
                Some(interleaved_q2(t).1 - d1)
            }
            _ => None,
        }
    }

    /// Exact `Q2(t) = ∫_{t0}^t ∫_{t0}^τ q`.
    pub fn iterated_exact(&self, t: f64) -> Option<f64> {
        let t0 = self.t0;
        match &*self.shape {
            &Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            } if alpha == 0.0 || gamma == 1.0 => {
                let power = alpha0 * ((t - t0) / t0 - (t / t0).ln());
                if alpha == 0.0 {
                    return Some(power);
                }
                // ∫_{t0}^t (t - s) cos(βs)/s ds
                let b = beta.abs();
                let ci = cos_integral(b * t) - cos_integral(b * t0);
                let sines = ((b * t).sin() - (b * t0).sin()) / b;
                Some(power + alpha * (t * ci - sines))
            }
            &Shape::Mathieu { delta, epsilon } => {
                let s0 = (2.0 * t0).sin();
                Some(
                    0.5 * delta * (t - t0).powi(2)
                        + 0.5 * epsilon * ((t0 * 2.0).cos() - (2.0 * t).cos()) / 2.0
                        - 0.5 * epsilon * s0 * (t - t0),
                )
            }
            &Shape::Constant { value } => Some(0.5 * value * (t - t0).powi(2)),
            Shape::Interleaved => {
                let (c0, d0, _) = interleaved_q2(t0);
                Some(interleaved_q2(t).0 - c0 - d0 * (t - t0))
            }
            _ => None,
        }
    }

    /// Exact limit of the Cesàro mean `Q2(t)/t`, where known.
    pub fn cesaro_limit(&self) -> Option<CesaroLimit> {
        let signed = |v: f64| {
            if v > 0.0 {
                CesaroLimit::PlusInfinity
            } else if v < 0.0 {
                CesaroLimit::MinusInfinity
            } else {
                CesaroLimit::Finite(0.0)
            }
        };
        match *self.shape {
            Shape::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
            } => {
                if alpha == 0.0 {
                    Some(CesaroLimit::Finite(alpha0 / self.t0))
                } else if gamma == 1.0 {
                    let ci = cos_integral(beta.abs() * self.t0);
                    Some(CesaroLimit::Finite(alpha0 / self.t0 - alpha * ci))
                } else {
                    None
                }
            }
            Shape::Mathieu { delta, epsilon } => Some(if delta == 0.0 {
                CesaroLimit::Finite(-0.5 * epsilon * (2.0 * self.t0).sin())
            } else {
                signed(delta)
            }),
            Shape::Constant { value } => Some(signed(value)),
            _ => None,
        }
    }

    /// `α0/t0` for the power-cosine family: the Cesàro limit when `t0` is
    /// chosen so that the oscillatory term contributes nothing. For an
    /// arbitrary `t0` the exact value is given by [`Self::cesaro_limit`].
    pub fn nominal_lambda(&self) -> Option<f64> {
        match &*self.shape {
            &Shape::PowerCosine { alpha0, .. } => Some(alpha0 / self.t0),
            _ => None,
        }
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, "must be finite"))
    }
}

fn interpolate(ts: &[f64], qs: &[f64], t: f64) -> Result<f64> {
    let lo = ts[0];
    let hi = ts[ts.len() - 1];
    if !(t >= lo && t <= hi) {
        return Err(Error::OutOfRange { t, lo, hi });
    }
    let i = match ts.partition_point(|&x| x <= t) {
        0 => 0,
        k if k >= ts.len() => ts.len() - 2,
        k => k - 1,
    };
    let w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    Ok(qs[i] + w * (qs[i + 1] - qs[i]))
}

/// `Σ_k c_k / (4 t² ln t ⋯ ln_k t)` with `c_r = 1 + ε` and `c_k = 1` otherwise.
fn log_stack_smooth(t: f64, epsilon: f64, r: u32) -> f64 {
    let t2 = 4.0 * t * t;
    let mut sum = 0.0;
    let mut prod = 1.0;
    let mut l = t;
    for k in 1..=r {
        l = if l > 0.0 { l.ln() } else { f64::NAN };
        prod *= l;
        let c = if k == r { 1.0 + epsilon } else { 1.0 };
        sum += c / (t2 * prod);
    }
    sum
}

fn interleaved_q(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    if s >= 0.0 {
        6.0 * s * s * c + 6.0 * t * s * c * c - 3.0 * t * s * s * s
    } else {
        2.0 * s * s * s + 12.0 * t * s * s * c + 6.0 * t * t * s * c * c - 3.0 * t * t * s * s * s
    }
}

/// The interleaved construct and its first two derivatives.
fn interleaved_q2(t: f64) -> (f64, f64, f64) {
    let (s, c) = t.sin_cos();
    let s3 = s * s * s;
    if s >= 0.0 {
        (t * s3, s3 + 3.0 * t * s * s * c, interleaved_q(t))
    } else {
        (
            t * t * s3,
            2.0 * t * s3 + 3.0 * t * t * s * s * c,
            interleaved_q(t),
        )
    }
}

/// Cosine integral `Ci(x) = γ + ln x + ∫_0^x (cos s - 1)/s ds` for `x > 0`.
pub fn cos_integral(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    if x <= 0.0 {
        return f64::NAN;
    }
    if x <= 4.0 {
        // Power series converges quickly for moderate x.
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
            let add = term / (2.0 * kf);
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return EULER + x.ln() + sum;
    }
    // Ci(x) = f(x) sin x - g(x) cos x with auxiliary functions from the
    // continued fraction for E1(ix) (modified Lentz).
    let (f, g) = aux_fg(x);
    f * x.sin() - g * x.cos()
}

fn aux_fg(x: f64) -> (f64, f64) {
    // E1(ix) = -Ci(x) + i (Si(x) - π/2) = e^{-ix} · cf(ix), where the
    // continued fraction 1/(z+1-1/(z+3-4/(z+5-…))) converges for |z| ≥ 2.
    let tiny = 1e-300;
    let (zr, zi) = (0.0, x);
    let mut b = (1.0 + zr, zi);
    let mut c = (1.0 / tiny, 0.0);
    let mut d = cdiv((1.0, 0.0), b);
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b = (b.0 + 2.0, b.1);
        d = cdiv((1.0, 0.0), cadd(cmul((an, 0.0), d), b));
        c = cadd(b, cdiv((an, 0.0), c));
        let del = cmul(c, d);
        h = cmul(h, del);
        if (del.0 - 1.0).abs() + del.1.abs() < 1e-16 {
            break;
        }
    }
    // E1(ix) = e^{-ix} h, Ci = -Re E1; Re E1 = cos x · h.re + sin x · h.im.
    // Written as f sin x - g cos x with f = -h.im, g = h.re.
    (-h.1, h.0)
}

fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let den = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / den, (a.1 * b.0 - a.0 * b.1) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_integral_reference_values() {
        // Abramowitz & Stegun table 5.1.
        assert!((cos_integral(1.0) - 0.337_403_922_900_968_1).abs() < 1e-14);
        assert!((cos_integral(0.5) - -0.177_784_078_806_612_4).abs() < 1e-14);
        assert!((cos_integral(5.0) - -0.190_029_749_656_643_9).abs() < 1e-13);
        assert!((cos_integral(10.0) - -0.045_456_433_004_455_37).abs() < 1e-13);
        assert!((cos_integral(100.0) - -0.005_148_825_142_610_493).abs() < 1e-14);
    }

    #[test]
    fn cos_integral_is_continuous_at_series_switch() {
        let below = cos_integral(4.0);
        let above = cos_integral(4.0 + 1e-12);
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn power_cosine_rejects_bad_parameters() {
        assert!(CoefficientProfile::power_cosine(0.3, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(CoefficientProfile::power_cosine(0.3, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(CoefficientProfile::power_cosine(0.3, 1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn pure_power_tail_is_exact() {
        let p = CoefficientProfile::power_cosine(0.3, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 0.3 / 4.0);
        let tail = p.tail_integral(5.0).unwrap();
        assert_eq!(tail.band, 0.0);
        assert!((tail.value - 0.06).abs() < 1e-16);
    }

    #[test]
    fn power_cosine_carries_nominal_lambda() {
        let p = CoefficientProfile::power_cosine(0.3, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.nominal_lambda(), Some(0.3));
        match p.cesaro_limit() {
            Some(CesaroLimit::Finite(v)) => {
                assert!((v - (0.3 - cos_integral(1.0))).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn log_stack_direct_substitution() {
        let t0 = std::f64::consts::E.exp() + 1.0;
        let p = CoefficientProfile::log_stack(1.0, 0.0, 1.0, 2, t0).unwrap();
        let l1 = t0.ln();
        let l2 = l1.ln();
        let expect =
            1.0 / (4.0 * t0 * t0) + 1.0 / (4.0 * t0 * t0 * l1) + 2.0 / (4.0 * t0 * t0 * l1 * l2);
        assert!((p.eval(t0).unwrap() - expect).abs() < 1e-16);
    }

    #[test]
    fn log_stack_tail_matches_finite_integral() {
        let p = CoefficientProfile::log_stack(1.0, 1.0, 1.0, 2, 3.0).unwrap();
        for &(a, b) in &[(50.0, 400.0), (1000.0, 1500.0), (5000.0, 20000.0)] {
            let (ta, tb) = (p.tail_integral(a).unwrap(), p.tail_integral(b).unwrap());
            let direct =
                crate::quad::integrate_split(|s| p.eval(s), a, b, &[], Some(1.0), 1e-15).unwrap();
            let err = (ta.value - tb.value - direct.value).abs();
            assert!(
                err <= ta.band + tb.band + 1e-12,
                "{a}: {err:e} vs {:e}",
                ta.band + tb.band
            );
            assert!(ta.band * a < 1e-3);
        }
    }

    #[test]
    fn log_stack_domain_boundary() {
        let e = std::f64::consts::E;
        match CoefficientProfile::log_stack(1.0, 1.0, 1.0, 2, e) {
            Err(Error::Domain { min_t0, .. }) => assert_eq!(min_t0, e),
            other => panic!("{other:?}"),
        }
        assert!(CoefficientProfile::log_stack(1.0, 1.0, 1.0, 2, e + 1e-9).is_ok());
        assert_eq!(log_stack_threshold(1), 1.0);
        assert!((log_stack_threshold(3) - e.exp()).abs() < 1e-12);
    }

    #[test]
    fn mathieu_rejects_zero_epsilon() {
        assert!(CoefficientProfile::mathieu(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn mathieu_cumulative_closed_form() {
        let p = CoefficientProfile::mathieu(0.0, 1.0, 0.0).unwrap();
        assert!(p.cumulative_exact(PI).unwrap().abs() < 1e-15);
        let p = CoefficientProfile::mathieu(-0.3, 1.0, 0.0).unwrap();
        assert_eq!(p.cesaro_limit(), Some(CesaroLimit::MinusInfinity));
    }

    #[test]
    fn tabulated_interpolation() {
        let p = CoefficientProfile::tabulated(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(p.eval(0.5).unwrap(), 1.0);
        let p = CoefficientProfile::tabulated(&[(0.0, 0.0), (2.0, 2.0)]).unwrap();
        assert_eq!(p.eval(1.0).unwrap(), 1.0);
        assert_eq!(p.t0(), 0.0);
        assert!(matches!(p.eval(2.5), Err(Error::OutOfRange { .. })));
        let p = CoefficientProfile::tabulated(&[(0.0, 1.0), (1.0, 0.0), (2.0, 1.0)]).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 1.0);
        assert_eq!(p.breakpoints(0.0, 2.0), vec![1.0]);
    }

    #[test]
    fn tabulated_rejects_non_monotone() {
        let err = CoefficientProfile::tabulated(&[(0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn interleaved_construct_is_twice_differentiable() {
        // q must match the second derivative of the construct on both sides of each kink.
        let h = 1e-4;
        for &t in &[0.3, 2.0, 4.0, 5.5, 20.0, 33.0] {
            let (c, d, q) = interleaved_q2(t);
            let (cp, _, _) = interleaved_q2(t + h);
            let (cm, _, _) = interleaved_q2(t - h);
            assert!(((cp - cm) / (2.0 * h) - d).abs() < 1e-5 * (1.0 + t * t));
            assert!(((cp - 2.0 * c + cm) / (h * h) - q).abs() < 1e-3 * (1.0 + t * t));
        }
        for k in 1..6 {
            let t = k as f64 * PI;
            let l = interleaved_q(t - 1e-12);
            let r = interleaved_q(t + 1e-12);
            assert!((l - r).abs() < 1e-8, "k = {k}: {l} vs {r}");
        }
    }
}
