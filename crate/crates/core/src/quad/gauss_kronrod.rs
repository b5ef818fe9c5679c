//! Adaptive Gauss-Kronrod (G7/K15) quadrature.
//!
//! The integrand is vector valued so that several integrals sharing the same
//! expensive evaluations (for instance `q(s)` and `(b - s) q(s)`) can be taken
//! in a single pass. Panels are refined by bisection until the local error
//! estimate drops below `tol` per unit length.

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1], positive half, descending; XGK[7] is the centre.
// Odd indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 30;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Single K15 panel: returns (kronrod estimate, error estimate) per component
/// and whether every component is limited by roundoff.
fn panel<const N: usize, F>(f: &F, a: f64, b: f64) -> Result<([f64; N], [f64; N], bool)>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut resk = [0.0; N];
    let mut resg = [0.0; N];
    let mut resabs = [0.0; N];
    let mut fv1 = [[0.0; N]; 7];
    let mut fv2 = [[0.0; N]; 7];
    for c in 0..N {
        resk[c] = fc[c] * WGK[7];
        resg[c] = fc[c] * WG[3];
        resabs[c] = resk[c].abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        for c in 0..N {
            let s = f1[c] + f2[c];
            resk[c] += WGK[j] * s;
            resabs[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                resg[c] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; N];
    let mut err = [0.0; N];
    let mut roundoff = true;
    for c in 0..N {
        let reskh = 0.5 * resk[c];
        let mut resasc = WGK[7] * (fc[c] - reskh).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((fv1[j][c] - reskh).abs() + (fv2[j][c] - reskh).abs());
        }
        let h = half.abs();
        let raw = ((resk[c] - resg[c]) * half).abs();
        let resasc = resasc * h;
        let resabs = resabs[c] * h;
        let mut e = raw;
        if resasc != 0.0 && e != 0.0 {
            e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
        }
        let floor = 50.0 * f64::EPSILON * resabs;
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(floor);
        }
        roundoff &= e <= floor;
        value[c] = resk[c] * half;
        err[c] = e;
    }
    Ok((value, err, roundoff))
}

struct Adaptive<'a, const N: usize, F> {
    f: &'a F,
    tol: f64,
    sums: [CompensatedSum; N],
    error: f64,
    evaluations: usize,
}

impl<const N: usize, F> Adaptive<'_, N, F>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    fn run(&mut self, a: f64, b: f64, depth: u32) -> Result<()> {
        let (value, err, roundoff) = panel(self.f, a, b)?;
        self.evaluations += 15;
        let len = (b - a).abs();
        let worst = err.iter().cloned().fold(0.0, f64::max);
        let scale = value.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let accept = worst <= self.tol * len
            || roundoff
            || worst <= 1e-14 * scale
            || depth >= MAX_DEPTH
            || len <= 64.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        if accept {
            for c in 0..N {
                if !value[c].is_finite() {
                    return Err(Error::NonFinite { t: 0.5 * (a + b) });
                }
                self.sums[c].add(value[c]);
            }
            self.error += worst;
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        self.run(a, mid, depth + 1)?;
        self.run(mid, b, depth + 1)
    }
}

/// Splits `[a, b]` at the given break points and into pieces no wider than
/// `max_panel`, then runs the adaptive rule on each piece in order.
pub fn integrate_vec<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    max_panel: Option<f64>,
    tol: f64,
) -> Result<([f64; N], QuadResult)>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    if a == b {
        return Ok((
            [0.0; N],
            QuadResult {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            },
        ));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(lo);
    cuts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();

    let mut driver = Adaptive {
        f: &f,
        tol,
        sums: [CompensatedSum::default(); N],
        error: 0.0,
        evaluations: 0,
    };
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let pieces = match max_panel {
            Some(width) if width > 0.0 => ((q - p) / width).ceil().max(1.0) as usize,
            _ => 1,
        };
        let step = (q - p) / pieces as f64;
        for k in 0..pieces {
            let x0 = p + step * k as f64;
            let x1 = if k + 1 == pieces {
                q
            } else {
                p + step * (k + 1) as f64
            };
            driver.run(x0, x1, 0)?;
        }
    }
    let mut out = [0.0; N];
    for c in 0..N {
        out[c] = sign * driver.sums[c].value();
    }
    Ok((
        out,
        QuadResult {
            value: out[0],
            error: driver.error,
            evaluations: driver.evaluations,
        },
    ))
}

/// Integrates a fallible scalar integrand over `[a, b]` with absolute error
/// control of `tol` per unit length.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_split(f, a, b, &[], None, tol)
}

/// As [`integrate`], with mandatory panel boundaries and an optional maximal
/// initial panel width (useful for long ranges of oscillatory integrands).
pub fn integrate_split<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    max_panel: Option<f64>,
    tol: f64,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let g = |x: f64| f(x).map(|v| [v]);
    integrate_vec::<1, _>(g, a, b, breaks, max_panel, tol).map(|(_, r)| r)
}

/// Infallible convenience wrapper.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate(|x| Ok(f(x)), a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        // K15 is exact through degree 22.
        for deg in 0..=22 {
            let r = integrate_fn(|x| x.powi(deg), 0.0, 10.0, 1e-3).unwrap();
            let exact = 10f64.powi(deg + 1) / (deg + 1) as f64;
            assert!(
                ((r.value - exact) / exact).abs() < 1e-12,
                "degree {deg}: {} vs {exact}",
                r.value
            );
        }
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate_fn(|x| x.exp(), 1.0, 0.0, 1e-12).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn kink_is_handled_by_break_point() {
        let f = |x: f64| Ok((x - 0.3).abs());
        let r = integrate_split(f, 0.0, 1.0, &[0.3], None, 1e-14).unwrap();
        let exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
        assert!((r.value - exact).abs() < 1e-15);
        assert_eq!(r.evaluations, 30);
    }

    #[test]
    fn oscillatory_long_range() {
        let r = integrate_split(|x| Ok(x.cos()), 0.0, 1000.0, &[], Some(2.0), 1e-12).unwrap();
        assert!((r.value - 1000f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn errors_propagate() {
        let f = |x: f64| {
            if x > 0.5 {
                Err(Error::OutOfRange {
                    t: x,
                    lo: 0.0,
                    hi: 0.5,
                })
            } else {
                Ok(1.0)
            }
        };
        assert!(matches!(
            integrate(f, 0.0, 1.0, 1e-9),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn vector_components_share_evaluations() {
        let (v, _) = integrate_vec::<2, _>(|x| Ok([x, x * x]), 0.0, 3.0, &[], None, 1e-12).unwrap();
        assert!((v[0] - 4.5).abs() < 1e-13);
        assert!((v[1] - 9.0).abs() < 1e-13);
    }
}
