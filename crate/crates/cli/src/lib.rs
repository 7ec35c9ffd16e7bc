//! Command-line front end: exact Weingarten tables and trace cumulants,
//! Monte Carlo runs of the partial-trace process, spectra of truncations,
//! and the exact-identity verification suite.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use haartrace::Group;
use serde::Serialize;

pub mod commands;
pub mod output;
pub mod verify;

use output::{Body, Format, Metadata};

/// Exit status when a check or verification fails.
pub const EXIT_FAILURE: u8 = 1;
/// Exit status for bad arguments or inputs the library rejects.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] haartrace::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "haartrace", version, about = "Trace statistics of truncated Haar unitary and orthogonal matrices")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// unitary (u) or orthogonal (o)
    #[arg(long, global = true, default_value = "unitary")]
    pub group: Group,
    /// Master seed; replica i uses stream i of this seed
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true, env = "HAARTRACE_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file (stdout if omitted)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Weingarten values at (group, n, k), keyed by cycle type
    Weingarten(WeingartenArgs),
    /// Exact cumulant of truncated traces, formula against oracle
    Cumulant(CumulantArgs),
    /// Monte Carlo covariance and k-statistics of W(s, t) on a grid
    Simulate(SimulateArgs),
    /// Eigenvalues of a truncation against the Kesten-McKay law
    Spectra(SpectraArgs),
    /// Exact identity suite
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeingartenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CumulantArgs {
    #[arg(long)]
    pub n: usize,
    /// Cumulant order; defaults to the number of --dims entries
    #[arg(long)]
    pub r: Option<usize>,
    /// Projector sizes "p:q,p:q,..."; a single entry is repeated r times
    #[arg(long)]
    pub dims: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    /// Levels for both s and t; the grid is their product
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectraArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 50)]
    pub replicas: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Quick,
    Default,
    Full,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "default")]
    pub scope: Scope,
    /// Corrupt the first comparison of the named identity (self-test of the suite)
    #[arg(long, hide = true)]
    pub perturb: Option<String>,
}

/// What a command produced, before rendering.
pub struct Outcome {
    pub body: Body,
    pub notes: Vec<String>,
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let group = cli.common.group;
    let seed = cli.common.seed;
    match &cli.command {
        Command::Weingarten(a) => commands::weingarten(group, a),
        Command::Cumulant(a) => commands::cumulant(group, a),
        Command::Simulate(a) => commands::simulate(group, seed, a),
        Command::Spectra(a) => commands::spectra(group, seed, a),
        Command::Verify(a) => verify::run(a),
    }
}

/// Runs the command, writes the report, and returns the exit status.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let started_at = chrono::Utc::now();
    let clock = Instant::now();
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.common.workers {
            if w == 0 {
                return Err(CliError::Usage("--workers must be positive".into()));
            }
            b = b.num_threads(w);
        }
        b.build()?
    };
    let outcome = pool.install(|| execute(cli))?;
    let meta = Metadata {
        tool: "haartrace",
        version: env!("CARGO_PKG_VERSION"),
        config: serde_json::to_value(cli)?,
        seed: cli.common.seed,
        workers: pool.current_num_threads(),
        started_at: started_at.to_rfc3339(),
        finished_at: chrono::Utc::now().to_rfc3339(),
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        notes: outcome.notes.clone(),
    };
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    let bytes = output::render(cli.common.format, &meta, &outcome.body)?;
    match &cli.common.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(if outcome.body.passed { 0 } else { EXIT_FAILURE })
}
