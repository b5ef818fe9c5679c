//! Problem files, reports and the subcommands behind the `osccrit` binary.

pub mod error;
pub mod problem;
pub mod report;
pub mod run;

pub use error::{CliError, Result};
pub use problem::{Overrides, Problem, ProblemSpec};
pub use report::{Format, RunReport, SweepReport};
pub use run::{run, sweep, Command};
