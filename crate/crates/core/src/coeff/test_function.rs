use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Unit,
    PeriodicCap {
        mu0: f64,
    },
    Custom {
        name: String,
        f: RealFn,
        df: RealFn,
        kinks: Vec<f64>,
    },
}

/// A positive, absolutely continuous weight `f` with locally square-integrable `f'`.
#[derive(Clone)]
pub struct TestFunction {
    kind: Kind,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TestFunction({})", self.describe())
    }
}

/// `f ≡ 1`.
pub fn unit_test_function() -> TestFunction {
    TestFunction { kind: Kind::Unit }
}

/// The π-periodic weight equal to `1 + μ0 cos 2t` on `[-π/4, π/4]` and to 1 on `(π/4, 3π/4]`.
pub fn corollary3_test_function(mu0: f64) -> Result<TestFunction> {
    if !(mu0.is_finite() && mu0 > 0.0) {
        return Err(Error::param("mu0", format!("must be positive, got {mu0}")));
    }
    Ok(TestFunction {
        kind: Kind::PeriodicCap { mu0 },
    })
}

/// Reduces `t` to `u ∈ [-π/4, 3π/4)` with `t ≡ u (mod π)`.
fn reduce(t: f64) -> f64 {
    t - PI * ((t + FRAC_PI_4) / PI).floor()
}

impl TestFunction {
    /// A user-supplied weight. `kinks` lists the points where `f'` jumps.
    pub fn custom<F, D>(name: impl Into<String>, f: F, df: D, mut kinks: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        kinks.sort_by(|a, b| a.total_cmp(b));
        kinks.dedup();
        TestFunction {
            kind: Kind::Custom {
                name: name.into(),
                f: Arc::new(f),
                df: Arc::new(df),
                kinks,
            },
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.kind, Kind::Unit)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Unit => "unit".into(),
            Kind::PeriodicCap { mu0 } => format!("periodic-cap(mu0={mu0})"),
            Kind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval_f(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Unit => 1.0,
            &Kind::PeriodicCap { mu0 } => {
                let u = reduce(t);
                if u <= FRAC_PI_4 {
                    1.0 + mu0 * (2.0 * u).cos().max(0.0)
                } else {
                    1.0
                }
            }
            Kind::Custom { f, .. } => f(t),
        }
    }

    /// `f'(t)`; at a kink the right derivative is returned.
    pub fn eval_df(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Unit => 0.0,
            &Kind::PeriodicCap { mu0 } => {
                let u = reduce(t);
                if (-FRAC_PI_4..FRAC_PI_4).contains(&u) {
                    -2.0 * mu0 * (2.0 * u).sin()
                } else {
                    0.0
                }
            }
            Kind::Custom { df, .. } => df(t),
        }
    }

    /// Kink points strictly inside `(a, b)`, ascending.
    pub fn kink_points(&self, a: f64, b: f64) -> Vec<f64> {
        match &self.kind {
            Kind::Unit => Vec::new(),
            Kind::PeriodicCap { .. } => {
                let mut out = Vec::new();
                let mut k = ((a - FRAC_PI_4) / (0.5 * PI)).floor() as i64;
                loop {
                    let x = FRAC_PI_4 + 0.5 * PI * k as f64;
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
            Kind::Custom { kinks, .. } => {
                kinks.iter().copied().filter(|&x| x > a && x < b).collect()
            }
        }
    }

    /// Checks positivity of `f` on an `n`-point grid over `[a, b]`.
    pub fn check_positive(&self, a: f64, b: f64, n: usize) -> Result<()> {
        let n = n.max(2);
        for i in 0..n {
            let t = a + (b - a) * i as f64 / (n - 1) as f64;
            let v = self.eval_f(t);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "test function {} is not positive at t = {t} (f = {v})",
                    self.describe()
                )));
            }
        }
        Ok(())
    }
}
