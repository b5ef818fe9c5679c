//! TOML problem files.
//!
//! A problem names a coefficient profile, a horizon, the criteria to
//! evaluate and optionally the Prüfer horizons and a parameter sweep.
//! Sweeps address any numeric field by a dotted path into the file, for
//! example `profile.gamma` or `criteria.0.q0`.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use osccrit::coeff::CoefficientProfile;
use osccrit::criteria::{CriterionRequest, ProfileAnalysis, Settings};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

fn pi() -> f64 {
    PI
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    /// `α0/t² + α cos(βt)/t^γ`.
    PowerCosine {
        alpha0: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        t0: f64,
    },
    /// `Σ 1/(4t² ln t ⋯ ln_k t)` with weight `1 + ε` on the last term, plus `α sin(βt)/(t ln t)`.
    LogStack {
        epsilon: f64,
        alpha: f64,
        beta: f64,
        r: u32,
        t0: f64,
    },
    Mathieu {
        delta: f64,
        epsilon: f64,
        #[serde(default)]
        t0: f64,
    },
    Constant {
        value: f64,
        #[serde(default)]
        t0: f64,
    },
    /// Two-column `t,q` CSV, relative to the problem file.
    Tabulated { path: PathBuf },
    InterleavedCubic {
        #[serde(default = "pi")]
        t0: f64,
    },
}

impl ProfileSpec {
    pub fn build(&self, base: &Path) -> Result<CoefficientProfile> {
        let p = match *self {
            ProfileSpec::PowerCosine {
                alpha0,
                alpha,
                beta,
                gamma,
                t0,
            } => CoefficientProfile::power_cosine(alpha0, alpha, beta, gamma, t0)?,
            ProfileSpec::LogStack {
                epsilon,
                alpha,
                beta,
                r,
                t0,
            } => CoefficientProfile::log_stack(epsilon, alpha, beta, r, t0)?,
            ProfileSpec::Mathieu { delta, epsilon, t0 } => {
                CoefficientProfile::mathieu(delta, epsilon, t0)?
            }
            ProfileSpec::Constant { value, t0 } => CoefficientProfile::constant(value, t0)?,
            ProfileSpec::Tabulated { ref path } => {
                CoefficientProfile::tabulated(&read_samples(&base.join(path))?)?
            }
            ProfileSpec::InterleavedCubic { t0 } => CoefficientProfile::interleaved_cubic(t0)?,
        };
        Ok(p)
    }
}

fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_err = |line: usize, message: String| CliError::Parse {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(parse_err(
                i + 1,
                "expected two comma-separated columns".into(),
            ));
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(t), Ok(q)) => out.push((t, q)),
            // A header row is allowed in front of the data.
            _ if out.is_empty() && i == 0 => continue,
            _ => {
                return Err(parse_err(
                    i + 1,
                    format!("cannot parse `{line}` as numbers"),
                ))
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    /// At least three strictly increasing horizons.
    pub horizons: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Dotted path of the swept field.
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        let bad = |m: &str| CliError::Invalid(osccrit::Error::InvalidInput(format!("sweep: {m}")));
        match (&self.values, &self.range) {
            (Some(v), None) if !v.is_empty() => Ok(v.clone()),
            (None, Some(r)) if r.steps >= 2 => Ok((0..r.steps)
                .map(|i| r.from + (r.to - r.from) * i as f64 / (r.steps - 1) as f64)
                .collect()),
            (None, Some(_)) => Err(bad("a range needs at least two steps")),
            _ => Err(bad("give exactly one of `values` (nonempty) or `range`")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub horizon: f64,
    #[serde(default)]
    pub settings: SettingsSpec,
    pub profile: ProfileSpec,
    #[serde(default)]
    pub criteria: Vec<CriterionRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ProblemSpec {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        if let Some(tol) = self.settings.tol {
            s.tol = tol;
        }
        if let Some(w) = self.settings.windows {
            s.windows = w;
        }
        s
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub horizon: Option<f64>,
    pub tol: Option<f64>,
    pub windows: Option<usize>,
}

impl Overrides {
    fn apply(&self, spec: &mut ProblemSpec) {
        if let Some(h) = self.horizon {
            spec.horizon = h;
        }
        if let Some(t) = self.tol {
            spec.settings.tol = Some(t);
        }
        if let Some(w) = self.windows {
            spec.settings.windows = Some(w);
        }
    }
}

/// A parsed problem file together with its raw tree and digest.
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub path: PathBuf,
    pub input_sha256: String,
    raw: toml::Table,
    overrides: Overrides,
}

impl Problem {
    pub fn load(path: &Path, overrides: Overrides) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path, overrides)
    }

    pub fn parse(text: &str, path: &Path, overrides: Overrides) -> Result<Self> {
        let parse_err = |e: toml::de::Error| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let raw: toml::Table = text.parse().map_err(parse_err)?;
        // Parsing the text directly keeps line and column in schema errors.
        let mut spec: ProblemSpec = toml::from_str(text).map_err(parse_err)?;
        overrides.apply(&mut spec);
        Ok(Self {
            spec,
            path: path.to_path_buf(),
            input_sha256: hex::encode(Sha256::digest(text.as_bytes())),
            raw,
            overrides,
        })
    }

    pub fn base_dir(&self) -> &Path {
        self.path.parent().unwrap_or(Path::new("."))
    }

    pub fn profile(&self) -> Result<CoefficientProfile> {
        self.spec.profile.build(self.base_dir())
    }

    pub fn analysis(&self) -> Result<ProfileAnalysis> {
        Ok(ProfileAnalysis::with_settings(
            &self.profile()?,
            self.spec.horizon,
            self.spec.settings(),
        )?)
    }

    /// The problem with the swept field set to `value` and the sweep removed.
    pub fn at(&self, parameter: &str, value: f64) -> Result<Problem> {
        let mut raw = self.raw.clone();
        raw.remove("sweep");
        set_path(&mut raw, parameter, value).map_err(|message| CliError::Parse {
            path: self.path.clone(),
            message: format!("sweep parameter `{parameter}`: {message}"),
        })?;
        let mut spec: ProblemSpec =
            raw.clone()
                .try_into()
                .map_err(|e: toml::de::Error| CliError::Parse {
                    path: self.path.clone(),
                    message: format!("sweep point {parameter} = {value}: {e}"),
                })?;
        self.overrides.apply(&mut spec);
        Ok(Problem {
            spec,
            path: self.path.clone(),
            input_sha256: self.input_sha256.clone(),
            raw,
            overrides: self.overrides,
        })
    }
}

fn set_path(root: &mut toml::Table, path: &str, value: f64) -> std::result::Result<(), String> {
    let keys: Vec<&str> = path.split('.').collect();
    let (last, parents) = keys.split_last().ok_or("empty path")?;
    let mut node = root
        .get_mut(keys[0])
        .ok_or_else(|| format!("no field `{}`", keys[0]))?;
    for key in &parents[1.min(parents.len())..] {
        node = step(node, key)?;
    }
    if parents.is_empty() {
        root.insert(last.to_string(), number(value, root.get(*last)));
        return Ok(());
    }
    let slot = step(node, last)?;
    *slot = number(value, Some(slot));
    Ok(())
}

fn step<'a>(
    node: &'a mut toml::Value,
    key: &str,
) -> std::result::Result<&'a mut toml::Value, String> {
    match node {
        toml::Value::Table(t) => t.get_mut(key).ok_or_else(|| format!("no field `{key}`")),
        toml::Value::Array(a) => {
            let i: usize = key
                .parse()
                .map_err(|_| format!("`{key}` is not an index"))?;
            let n = a.len();
            a.get_mut(i)
                .ok_or_else(|| format!("index {i} out of range (length {n})"))
        }
        _ => Err(format!("cannot descend into `{key}`")),
    }
}

/// Keeps integer fields integral.
fn number(value: f64, old: Option<&toml::Value>) -> toml::Value {
    match old {
        Some(toml::Value::Integer(_)) if value.fract() == 0.0 => toml::Value::Integer(value as i64),
        _ => toml::Value::Float(value),
    }
}
