use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use osccrit_cli::{run, sweep, CliError, Command, Format, Overrides, Problem, Result};

/// Oscillation criteria for q(t)-driven second-order linear equations.
#[derive(Parser)]
#[command(name = "osccrit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Override the problem's horizon.
    #[arg(long, global = true)]
    horizon: Option<f64>,
    /// Absolute quadrature tolerance per unit length.
    #[arg(long, global = true, env = "OSCCRIT_TOL")]
    tol: Option<f64>,
    /// Number of asymptotic windows.
    #[arg(long, global = true)]
    windows: Option<usize>,
    /// Write the report here instead of the problem's output paths or stdout.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Leave out timings so identical inputs give identical bytes.
    #[arg(long, global = true)]
    no_meta: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the Cesàro mean of Q2.
    Classify { problem: PathBuf },
    /// Classify and evaluate the requested criteria.
    Check { problem: PathBuf },
    /// Count zeros with the Prüfer phase at the [verify] horizons.
    Verify { problem: PathBuf },
    /// Minimise F over the cap parameter for a Mathieu profile.
    Mathieu { problem: PathBuf },
    /// Evaluate the criteria over the [sweep] grid.
    Sweep { problem: PathBuf },
}

/// A finished report in both renderings.
trait Render {
    fn json(&self) -> serde_json::Result<String>;
    fn csv(&self, w: &mut dyn Write) -> io::Result<()>;
}

impl Render for osccrit_cli::RunReport {
    fn json(&self) -> serde_json::Result<String> {
        self.to_json()
    }
    fn csv(&self, w: &mut dyn Write) -> io::Result<()> {
        self.write_csv(w)
    }
}

impl Render for osccrit_cli::SweepReport {
    fn json(&self) -> serde_json::Result<String> {
        self.to_json()
    }
    fn csv(&self, w: &mut dyn Write) -> io::Result<()> {
        self.write_csv(w)
    }
}

fn write_to(path: Option<&Path>, format: Format, r: &dyn Render) -> Result<()> {
    let io_err = |source| CliError::Io {
        path: path
            .map(Path::to_path_buf)
            .unwrap_or_else(|| "<stdout>".into()),
        source,
    };
    let mut w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err)?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            let s = r.json().map_err(|e| io_err(e.into()))?;
            w.write_all(s.as_bytes()).map_err(io_err)?;
        }
        Format::Csv => r.csv(&mut w).map_err(io_err)?,
    }
    w.flush().map_err(io_err)
}

fn emit(cli: &Cli, problem: &Problem, r: &dyn Render) -> Result<()> {
    if let Some(out) = &cli.out {
        return write_to(Some(out), cli.format, r);
    }
    let o = &problem.spec.output;
    if o.report.is_none() && o.csv.is_none() {
        return write_to(None, cli.format, r);
    }
    if let Some(p) = &o.report {
        write_to(Some(&problem.base_dir().join(p)), Format::Json, r)?;
    }
    if let Some(p) = &o.csv {
        write_to(Some(&problem.base_dir().join(p)), Format::Csv, r)?;
    }
    Ok(())
}

fn main_inner(cli: &Cli) -> Result<()> {
    let overrides = Overrides {
        horizon: cli.horizon,
        tol: cli.tol,
        windows: cli.windows,
    };
    let (path, cmd) = match &cli.cmd {
        Cmd::Classify { problem } => (problem, Some(Command::Classify)),
        Cmd::Check { problem } => (problem, Some(Command::Check)),
        Cmd::Verify { problem } => (problem, Some(Command::Verify)),
        Cmd::Mathieu { problem } => (problem, Some(Command::Mathieu)),
        Cmd::Sweep { problem } => (problem, None),
    };
    let problem = Problem::load(path, overrides)?;
    match cmd {
        Some(cmd) => emit(cli, &problem, &run(&problem, cmd, !cli.no_meta)?),
        None => emit(cli, &problem, &sweep(&problem, !cli.no_meta)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("osccrit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
