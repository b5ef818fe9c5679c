//! Run reports: JSON for machines, CSV for plotting.

use std::collections::BTreeMap;
use std::io::{self, Write};

use osccrit::criteria::{CaseClassification, CriterionId, CriterionVerdict, VerdictStatus};
use osccrit::mathieu::MathieuAnalysis;
use osccrit::prufer::OscillationEvidence;
use serde::{Deserialize, Serialize};

use crate::problem::ProblemSpec;
use crate::run::Command;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Everything that varies between otherwise identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: Tool,
    pub command: Command,
    pub input_sha256: String,
    /// The problem as run, with command-line overrides applied.
    pub problem: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<CaseClassification>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<CriterionVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prufer: Option<OscillationEvidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mathieu: Option<MathieuAnalysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

pub fn status_name(s: VerdictStatus) -> &'static str {
    match s {
        VerdictStatus::SatisfiedOnHorizon => "SatisfiedOnHorizon",
        VerdictStatus::FailedOnHorizon => "FailedOnHorizon",
        VerdictStatus::Inconclusive => "Inconclusive",
    }
}

pub fn criterion_name(id: CriterionId) -> String {
    match serde_json::to_value(id) {
        Ok(serde_json::Value::String(s)) => s,
        _ => format!("{id:?}"),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|mut s| {
            s.push('\n');
            s
        })
    }

    /// The CSV view for the report's command.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        match self.command {
            Command::Classify => {
                writeln!(w, "field,value")?;
                if let Some(c) = &self.classification {
                    writeln!(w, "label,{:?}", c.label)?;
                    writeln!(w, "lambda,{}", opt(c.lambda))?;
                    writeln!(w, "liminf,{}", c.liminf.value)?;
                    writeln!(w, "limsup,{}", c.limsup.value)?;
                    writeln!(w, "limit,{}", c.limit.value)?;
                    writeln!(w, "horizon,{}", c.horizon)?;
                }
            }
            Command::Check => {
                writeln!(w, "criterion_id,status,condition,margin,resolution")?;
                for v in &self.verdicts {
                    let id = criterion_name(v.criterion_id);
                    let status = status_name(v.status);
                    for (cond, m) in &v.margins {
                        let r = v.resolution.get(cond).copied().unwrap_or(0.0);
                        writeln!(w, "{id},{status},{cond},{m},{r}")?;
                    }
                    if v.margins.is_empty() {
                        writeln!(w, "{id},{status},,,")?;
                    }
                }
            }
            Command::Verify => {
                writeln!(w, "horizon,zero_count")?;
                if let Some(e) = &self.prufer {
                    for (h, c) in e.horizons.iter().zip(&e.counts) {
                        writeln!(w, "{h},{c}")?;
                    }
                }
            }
            Command::Mathieu => {
                writeln!(w, "mu,F")?;
                if let Some(m) = &self.mathieu {
                    for (mu, f) in &m.f_samples {
                        writeln!(w, "{mu},{f}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    /// `None` when the point failed; `error` then says why.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub statuses: Vec<Option<VerdictStatus>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub tool: Tool,
    pub input_sha256: String,
    pub parameter: String,
    pub problem: ProblemSpec,
    /// One column per verdict, in request order.
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl SweepReport {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|mut s| {
            s.push('\n');
            s
        })
    }

    /// `value,case,<column>...,error` with one row per grid point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "{},case", self.parameter)?;
        for c in &self.columns {
            write!(w, ",{c}")?;
        }
        writeln!(w, ",error")?;
        for r in &self.rows {
            write!(w, "{},{}", r.value, r.case.as_deref().unwrap_or(""))?;
            for s in &r.statuses {
                write!(w, ",{}", s.map(status_name).unwrap_or(""))?;
            }
            // Messages may contain commas.
            let err = r.error.as_deref().unwrap_or("").replace('"', "'");
            if err.is_empty() {
                writeln!(w, ",")?;
            } else {
                writeln!(w, ",\"{err}\"")?;
            }
        }
        Ok(())
    }
}

/// Column labels for a list of verdicts; repeated ids get a `#n` suffix.
pub fn column_labels(verdicts: &[CriterionVerdict]) -> Vec<String> {
    let mut seen: BTreeMap<CriterionId, usize> = BTreeMap::new();
    verdicts
        .iter()
        .map(|v| {
            let n = seen.entry(v.criterion_id).or_default();
            *n += 1;
            let name = criterion_name(v.criterion_id);
            if *n == 1 {
                name
            } else {
                format!("{name}#{n}")
            }
        })
        .collect()
}
