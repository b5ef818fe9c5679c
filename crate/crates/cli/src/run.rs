use std::collections::BTreeMap;
use std::time::Instant;

use osccrit::criteria::{run_suite, CriterionVerdict};
use osccrit::{mathieu, prufer};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::problem::{Problem, ProfileSpec};
use crate::report::{column_labels, Meta, RunReport, SweepReport, SweepRow, Tool};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Check,
    Verify,
    Mathieu,
}

#[derive(Default)]
struct Clock(BTreeMap<String, f64>);

impl Clock {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f();
        self.0
            .insert(stage.to_string(), start.elapsed().as_secs_f64());
        out
    }

    fn meta(self, keep: bool) -> Option<Meta> {
        keep.then(|| Meta {
            timings: self.0,
            threads: rayon::current_num_threads(),
        })
    }
}

fn invalid(msg: &str) -> CliError {
    CliError::Invalid(osccrit::Error::InvalidInput(msg.to_string()))
}

/// Runs one subcommand. Only malformed input or a numerical breakdown is an
/// error; failed criteria are ordinary results.
pub fn run(problem: &Problem, cmd: Command, meta: bool) -> Result<RunReport> {
    let spec = &problem.spec;
    let mut clock = Clock::default();
    let mut report = RunReport {
        tool: Tool::current(),
        command: cmd,
        input_sha256: problem.input_sha256.clone(),
        problem: spec.clone(),
        classification: None,
        verdicts: Vec::new(),
        prufer: None,
        mathieu: None,
        meta: None,
    };
    match cmd {
        Command::Classify | Command::Check => {
            let analysis = clock.time("setup", || problem.analysis())?;
            report.classification =
                Some(clock.time("classify", || Ok(analysis.classification()?.clone()))?);
            if cmd == Command::Check {
                report.verdicts =
                    clock.time("criteria", || Ok(run_suite(&analysis, &spec.criteria)?))?;
                if let Some(v) = &spec.verify {
                    let p = analysis.profile();
                    report.prufer = Some(clock.time("prufer", || {
                        Ok(prufer::oscillation_evidence(p, &v.horizons)?)
                    })?);
                }
            }
        }
        Command::Verify => {
            let v = spec
                .verify
                .as_ref()
                .ok_or_else(|| invalid("verify needs a [verify] table with horizons"))?;
            let p = problem.profile()?;
            report.prufer = Some(clock.time("prufer", || {
                Ok(prufer::oscillation_evidence(&p, &v.horizons)?)
            })?);
        }
        Command::Mathieu => {
            let ProfileSpec::Mathieu { delta, epsilon, .. } = spec.profile else {
                return Err(invalid("mathieu needs a mathieu profile"));
            };
            let tol = spec.settings().tol;
            report.mathieu = Some(clock.time("mathieu", || {
                Ok(mathieu::check_corollary3(delta, epsilon, tol)?)
            })?);
        }
    }
    report.meta = clock.meta(meta);
    Ok(report)
}

/// Case label and verdicts at one sweep point.
type Point = (String, Vec<CriterionVerdict>);

fn evaluate(problem: &Problem) -> Result<Point> {
    let analysis = problem.analysis()?;
    let case = format!("{:?}", analysis.classification()?.label);
    Ok((case, run_suite(&analysis, &problem.spec.criteria)?))
}

/// Evaluates the criteria suite at every grid point of the problem's sweep.
/// A failure at one point is recorded in its row and does not stop the rest.
pub fn sweep(problem: &Problem, meta: bool) -> Result<SweepReport> {
    let s = problem
        .spec
        .sweep
        .as_ref()
        .ok_or_else(|| invalid("sweep needs a [sweep] table"))?;
    let start = Instant::now();
    // Path and schema errors are the same at every point, so they surface here.
    let points: Vec<(f64, Problem)> = s
        .points()?
        .into_iter()
        .map(|v| Ok((v, problem.at(&s.parameter, v)?)))
        .collect::<Result<_>>()?;
    let results: Vec<(f64, Result<Point>)> = points
        .into_par_iter()
        .map(|(v, p)| (v, evaluate(&p)))
        .collect();

    let columns = results
        .iter()
        .find_map(|(_, r)| r.as_ref().ok())
        .map(|(_, v)| column_labels(v))
        .unwrap_or_default();
    let rows = results
        .into_iter()
        .map(|(value, r)| match r {
            Ok((case, verdicts)) => SweepRow {
                value,
                case: Some(case),
                statuses: verdicts.iter().map(|v| Some(v.status)).collect(),
                error: None,
            },
            Err(e) => SweepRow {
                value,
                case: None,
                statuses: vec![None; columns.len()],
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut clock = Clock::default();
    clock
        .0
        .insert("sweep".into(), start.elapsed().as_secs_f64());
    Ok(SweepReport {
        tool: Tool::current(),
        input_sha256: problem.input_sha256.clone(),
        parameter: s.parameter.clone(),
        problem: problem.spec.clone(),
        columns,
        rows,
        meta: clock.meta(meta),
    })
}
