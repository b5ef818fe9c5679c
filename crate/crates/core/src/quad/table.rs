//! Cumulative antiderivative tables on a fixed grid.

use std::io::{self, Write};

use super::gauss_kronrod::{integrate_vec, CompensatedSum};
use crate::coeff::CoefficientProfile;
use crate::error::{Error, Result};

/// Default grid spacing for cumulative tables.
pub const DEFAULT_STEP: f64 = 1.0 / 16.0;

const MAX_CELLS: f64 = 4.0e6;

/// Builds a strictly increasing grid from `a` to `b` with spacing at most
/// `step`, including every break point inside `(a, b)`.
pub fn make_grid(a: f64, b: f64, step: f64, breaks: &[f64]) -> Vec<f64> {
    let span = b - a;
    let n = (span / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut grid: Vec<f64> = (0..n).map(|k| a + h * k as f64).collect();
    grid.push(b);
    if !breaks.is_empty() {
        grid.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
        grid.sort_by(|x, y| x.total_cmp(y));
        let eps = 1e-12 * a.abs().max(b.abs()).max(1.0);
        let mut out: Vec<f64> = Vec::with_capacity(grid.len());
        for x in grid {
            match out.last() {
                Some(&last) if x - last <= eps => {
                    // keep break points exactly; the endpoint always wins
                    if x == b || breaks.contains(&x) {
                        *out.last_mut().unwrap() = x;
                    }
                }
                _ => out.push(x),
            }
        }
        if out[0] != a {
            out.insert(0, a);
        }
        return out;
    }
    grid
}

/// Default grid step for a span: `DEFAULT_STEP`, finer for short spans,
/// coarser when the cell count would become excessive.
pub fn default_step(span: f64) -> f64 {
    DEFAULT_STEP.min(span / 64.0).max(span / MAX_CELLS)
}

fn locate(grid: &[f64], t: f64) -> usize {
    match grid.partition_point(|&x| x <= t) {
        0 => 0,
        k if k >= grid.len() => grid.len() - 2,
        k => k - 1,
    }
}

/// Piecewise cubic Hermite interpolant through values and slopes on a grid.
#[derive(Clone, Debug)]
pub struct HermiteSeries {
    grid: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl HermiteSeries {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || values.len() != grid.len() || slopes.len() != grid.len() {
            return Err(Error::InvalidInput(
                "Hermite series needs matching grid, value and slope arrays of length ≥ 2".into(),
            ));
        }
        Ok(Self {
            grid,
            values,
            slopes,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn start(&self) -> f64 {
        self.grid[0]
    }

    pub fn end(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Evaluates the interpolant; outside the grid the end cells are extrapolated.
    pub fn eval(&self, t: f64) -> f64 {
        let i = locate(&self.grid, t);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let s = (t - x0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.values[i]
            + h * h10 * self.slopes[i]
            + h01 * self.values[i + 1]
            + h * h11 * self.slopes[i + 1]
    }

    /// Derivative of the interpolant.
    pub fn derivative(&self, t: f64) -> f64 {
        let i = locate(&self.grid, t);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let s = (t - x0) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        d00 * self.values[i]
            + d10 * self.slopes[i]
            + d01 * self.values[i + 1]
            + d11 * self.slopes[i + 1]
    }
}

/// `Q1(t) = ∫_{t0}^t q` and `Q2(t) = ∫_{t0}^t Q1` tabulated on a grid.
#[derive(Clone, Debug)]
pub struct CumulativeTable {
    profile: CoefficientProfile,
    grid: Vec<f64>,
    q: Vec<f64>,
    q1: Vec<f64>,
    q2: Vec<f64>,
    tol: f64,
}

impl CumulativeTable {
    /// Builds the table on `[t0, t_end]` with the default grid spacing.
    pub fn build(profile: &CoefficientProfile, t_end: f64, tol: f64) -> Result<Self> {
        let span = t_end - profile.t0();
        Self::build_with_step(profile, t_end, tol, default_step(span))
    }

    pub fn build_with_step(
        profile: &CoefficientProfile,
        t_end: f64,
        tol: f64,
        step: f64,
    ) -> Result<Self> {
        let t0 = profile.t0();
        if !(t_end > t0) {
            return Err(Error::InvalidInput(format!(
                "table end {t_end} must exceed the domain start {t0}"
            )));
        }
        if !(step > 0.0) {
            return Err(Error::param("step", "must be positive"));
        }
        let grid = make_grid(t0, t_end, step, &profile.breakpoints(t0, t_end));
        let n = grid.len();

        // Per cell: ∫ q and ∫ (x_{i+1} - s) q(s) ds.
        let cells: Vec<[f64; 2]> = {
            use rayon::prelude::*;
            grid.par_windows(2)
                .map(|w| {
                    let (a, b) = (w[0], w[1]);
                    integrate_vec::<2, _>(
                        |s| profile.eval(s).map(|v| [v, (b - s) * v]),
                        a,
                        b,
                        &[],
                        None,
                        tol,
                    )
                    .map(|(v, _)| v)
                })
                .collect::<Result<Vec<_>>>()?
        };

        let mut q = Vec::with_capacity(n);
        for &t in &grid {
            q.push(eval_one_sided(profile, t, t0, t_end)?);
        }
        let mut q1 = Vec::with_capacity(n);
        let mut q2 = Vec::with_capacity(n);
        let mut s1 = CompensatedSum::default();
        let mut s2 = CompensatedSum::default();
        q1.push(0.0);
        q2.push(0.0);
        for (i, c) in cells.iter().enumerate() {
            let h = grid[i + 1] - grid[i];
            let prev = s1.value();
            s2.add(h * prev + c[1]);
            s1.add(c[0]);
            q1.push(s1.value());
            q2.push(s2.value());
        }
        Ok(Self {
            profile: profile.clone(),
            grid,
            q,
            q1,
            q2,
            tol,
        })
    }

    pub fn profile(&self) -> &CoefficientProfile {
        &self.profile
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    pub fn q1(&self) -> &[f64] {
        &self.q1
    }

    pub fn q2(&self) -> &[f64] {
        &self.q2
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn t0(&self) -> f64 {
        self.grid[0]
    }

    pub fn t_end(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    fn check_range(&self, t: f64) -> Result<()> {
        let (lo, hi) = (self.t0(), self.t_end());
        if t >= lo && t <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange { t, lo, hi })
        }
    }

    /// `Q1(t)` from the nearest grid point plus one quadrature.
    pub fn q1_at(&self, t: f64) -> Result<f64> {
        self.check_range(t)?;
        let i = locate(&self.grid, t);
        let a = self.grid[i];
        let (v, _) = integrate_vec::<1, _>(
            |s| self.profile.eval(s).map(|v| [v]),
            a,
            t,
            &[],
            None,
            self.tol,
        )?;
        Ok(self.q1[i] + v[0])
    }

    /// `Q2(t)` from the nearest grid point plus one quadrature.
    pub fn q2_at(&self, t: f64) -> Result<f64> {
        self.check_range(t)?;
        let i = locate(&self.grid, t);
        let a = self.grid[i];
        let (v, _) = integrate_vec::<1, _>(
            |s| self.profile.eval(s).map(|v| [(t - s) * v]),
            a,
            t,
            &[],
            None,
            self.tol,
        )?;
        Ok(self.q2[i] + (t - a) * self.q1[i] + v[0])
    }

    /// Hermite interpolant of `Q1` (slopes `q`).
    pub fn q1_series(&self) -> HermiteSeries {
        HermiteSeries {
            grid: self.grid.clone(),
            values: self.q1.clone(),
            slopes: self.q.clone(),
        }
    }

    /// Hermite interpolant of `Q2` (slopes `Q1`).
    pub fn q2_series(&self) -> HermiteSeries {
        HermiteSeries {
            grid: self.grid.clone(),
            values: self.q2.clone(),
            slopes: self.q1.clone(),
        }
    }

    /// Grid samples `(t, Q2(t)/t)` for `t > 0` within `[from, to]`.
    pub fn cesaro_samples(&self, from: f64, to: f64) -> (Vec<f64>, Vec<f64>) {
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for (i, &t) in self.grid.iter().enumerate() {
            if t >= from && t <= to && t > 0.0 {
                ts.push(t);
                vs.push(self.q2[i] / t);
            }
        }
        (ts, vs)
    }

    /// Writes the table as CSV with columns `t,Q1,Q2`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,Q1,Q2")?;
        for i in 0..self.grid.len() {
            writeln!(w, "{},{},{}", self.grid[i], self.q1[i], self.q2[i])?;
        }
        Ok(())
    }
}

/// Evaluates `q` at a grid point, nudging inward if the point itself is singular.
fn eval_one_sided(profile: &CoefficientProfile, t: f64, lo: f64, hi: f64) -> Result<f64> {
    match profile.eval(t) {
        Ok(v) => Ok(v),
        Err(e) => {
            let nudge = 1e-9 * t.abs().max(1.0);
            let alt = if t + nudge <= hi {
                t + nudge
            } else {
                (t - nudge).max(lo)
            };
            profile.eval(alt).map_err(|_| e)
        }
    }
}

/// Running integral `∫_{a}^t g` of an arbitrary integrand on a grid.
pub fn cumulative_series<F>(g: F, grid: Vec<f64>, tol: f64) -> Result<HermiteSeries>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let cells: Vec<f64> = grid
        .par_windows(2)
        .map(|w| {
            integrate_vec::<1, _>(|s| g(s).map(|v| [v]), w[0], w[1], &[], None, tol)
                .map(|(v, _)| v[0])
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(grid.len());
    let mut sum = CompensatedSum::default();
    values.push(0.0);
    for c in cells {
        sum.add(c);
        values.push(sum.value());
    }
    let n = grid.len();
    let mut slopes = Vec::with_capacity(n);
    for (i, &t) in grid.iter().enumerate() {
        let v = match g(t) {
            Ok(v) => v,
            Err(_) => {
                let j = if i + 1 < n { i + 1 } else { i - 1 };
                g(0.5 * (t + grid[j]))?
            }
        };
        slopes.push(v);
    }
    HermiteSeries::new(grid, values, slopes)
}

// Five-point Gauss-Legendre rule on [-1, 1].
const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Nested cumulative integrals `G(t) = ∫ h` and `E(t) = ∫ w·G` on a grid.
///
/// The grid must include every point where `h` or `w` is not smooth.
#[derive(Clone, Debug)]
pub struct NestedCumulative {
    pub grid: Vec<f64>,
    pub inner: Vec<f64>,
    pub outer: Vec<f64>,
    pub weight: Vec<f64>,
}

impl NestedCumulative {
    pub fn build<H, W>(grid: Vec<f64>, h: H, w: W, tol: f64) -> Result<Self>
    where
        H: Fn(f64) -> Result<f64> + Sync,
        W: Fn(f64) -> Result<f64> + Sync,
    {
        use rayon::prelude::*;
        // Per cell: ∫ h, and ∫ w(s) ∫_{a}^{s} h ds via Gauss-Legendre on the
        // outer variable with an adaptive inner integral.
        let cells: Vec<[f64; 3]> = grid
            .par_windows(2)
            .map(|win| {
                let (a, b) = (win[0], win[1]);
                let (total, _) =
                    integrate_vec::<1, _>(|s| h(s).map(|v| [v]), a, b, &[], None, tol)?;
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                let mut wsum = 0.0;
                let mut nested = 0.0;
                for k in 0..5 {
                    let s = mid + half * GL5_X[k];
                    let ws = w(s)?;
                    let (part, _) =
                        integrate_vec::<1, _>(|x| h(x).map(|v| [v]), a, s, &[], None, tol)?;
                    wsum += GL5_W[k] * ws;
                    nested += GL5_W[k] * ws * part[0];
                }
                Ok([total[0], half * wsum, half * nested])
            })
            .collect::<Result<_>>()?;
        let n = grid.len();
        let mut inner = Vec::with_capacity(n);
        let mut outer = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        let mut gi = CompensatedSum::default();
        let mut eo = CompensatedSum::default();
        inner.push(0.0);
        outer.push(0.0);
        for c in &cells {
            let g_prev = gi.value();
            eo.add(g_prev * c[1] + c[2]);
            gi.add(c[0]);
            inner.push(gi.value());
            outer.push(eo.value());
        }
        for &t in &grid {
            weight.push(w(t)?);
        }
        Ok(Self {
            grid,
            inner,
            outer,
            weight,
        })
    }

    /// Hermite interpolant of the outer integral (slope `w·G`).
    pub fn outer_series(&self) -> HermiteSeries {
        let slopes = self
            .inner
            .iter()
            .zip(&self.weight)
            .map(|(g, w)| g * w)
            .collect();
        HermiteSeries {
            grid: self.grid.clone(),
            values: self.outer.clone(),
            slopes,
        }
    }
}

/// `(1/t^α) ∫_{t0}^t (t - τ)^α q(τ) dτ`.
pub fn weighted_average(profile: &CoefficientProfile, alpha: f64, t: f64, tol: f64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(Error::param(
            "alpha",
            format!("must be at least 1, got {alpha}"),
        ));
    }
    let t0 = profile.t0();
    if !(t > t0) {
        return Err(Error::InvalidInput(format!(
            "t = {t} must exceed t0 = {t0}"
        )));
    }
    let breaks = profile.breakpoints(t0, t);
    let (v, _) = integrate_vec::<1, _>(
        |s| profile.eval(s).map(|q| [((t - s) / t).powf(alpha) * q]),
        t0,
        t,
        &breaks,
        Some(2.0),
        tol,
    )?;
    Ok(v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_includes_breaks() {
        let g = make_grid(0.0, 1.0, 0.25, &[0.3]);
        assert_eq!(g, vec![0.0, 0.25, 0.3, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn grid_without_breaks_is_uniform() {
        let g = make_grid(1.0, 2.0, 0.3, &[]);
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 2.0);
    }

    #[test]
    fn constant_profile_table() {
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        let t = CumulativeTable::build(&p, 4.0, 1e-12).unwrap();
        assert_eq!(t.q1()[0], 0.0);
        assert_eq!(t.q2()[0], 0.0);
        assert!((t.q1().last().unwrap() - 4.0).abs() < 1e-12);
        assert!((t.q2().last().unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_table() {
        let p = CoefficientProfile::custom("cos", 0.0, f64::cos).unwrap();
        let t = CumulativeTable::build(&p, 2.0 * PI, 1e-13).unwrap();
        assert!(t.q1_at(PI).unwrap().abs() < 1e-12);
        assert!((t.q2_at(PI).unwrap() - 2.0).abs() < 1e-12);
        let s = t.q2_series();
        assert!((s.eval(1.0) - (1.0 - 1f64.cos())).abs() < 1e-8);
    }

    #[test]
    fn weighted_average_constant_and_cosine() {
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        assert!((weighted_average(&p, 1.0, 2.0, 1e-12).unwrap() - 1.0).abs() < 1e-14);
        let p = CoefficientProfile::custom("cos", 0.0, f64::cos).unwrap();
        assert!(weighted_average(&p, 1.0, 2.0 * PI, 1e-12).unwrap().abs() < 1e-12);
        assert!(weighted_average(&p, 0.5, 2.0, 1e-12).is_err());
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let grid: Vec<f64> = (0..5).map(|i| i as f64 * 0.7).collect();
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let s = HermiteSeries::new(
            grid.clone(),
            grid.iter().map(|&x| f(x)).collect(),
            grid.iter().map(|&x| df(x)).collect(),
        )
        .unwrap();
        for &x in &[0.1, 1.0, 2.2, 2.8] {
            assert!((s.eval(x) - f(x)).abs() < 1e-12);
            assert!((s.derivative(x) - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn nested_cumulative_polynomial() {
        // h = 1, w = t ⇒ G = t, E = t³/3 on [0, 3].
        let grid = make_grid(0.0, 3.0, 0.5, &[]);
        let n = NestedCumulative::build(grid, |_| Ok(1.0), Ok, 1e-13).unwrap();
        assert!((n.inner.last().unwrap() - 3.0).abs() < 1e-13);
        assert!((n.outer.last().unwrap() - 9.0).abs() < 1e-12);
        assert!((n.outer_series().eval(1.3) - 1.3f64.powi(3) / 3.0).abs() < 1e-12);
    }
}
