//! Command-line front end.
//!
//! ```text
//! whmc <estimate|fptime-cdf|rate-study|gerber-shiu> --config run.json
//!      [--seed <u64>] [--workers <k>] [--out <path>]
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_estimate, cmd_fptime_cdf, cmd_gerber_shiu, cmd_rate_study, FptimeCdf, Outcome, SweepPoint,
};
pub use config::{Format, RunConfig, SampleSpec, SCHEMA_VERSION};
pub use output::{format_float, Artifact, Cell, Table};

use crate::error::{Result, WhmcError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "whmc",
    version,
    about = "Wiener-Hopf Monte Carlo for first-passage functionals of Levy processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; overrides rng.seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random substreams and threads; overrides rng.workers.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Artifact path; overrides output.path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate E[f] with plain, WHMC or multilevel Monte Carlo.
    Estimate(Common),
    /// Brownian first-passage cdf: closed form vs plain MC vs WHMC.
    FptimeCdf(Common),
    /// Consecutive-level MSE of the 4-tuple coordinates.
    RateStudy(Common),
    /// Discounted overshoot functional against the step count.
    GerberShiu(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Estimate(c)
            | Command::FptimeCdf(c)
            | Command::RateStudy(c)
            | Command::GerberShiu(c) => c,
        }
    }
}

fn exit_code(e: &WhmcError) -> i32 {
    if e.is_config() || matches!(e, WhmcError::Io(_)) {
        EXIT_CONFIG
    } else {
        EXIT_NUMERIC
    }
}

/// Loads the config, runs the command on a pool of `workers` threads and
/// writes the artifact. Returns the artifact path.
pub fn execute(command: &Command) -> Result<PathBuf> {
    let common = command.common();
    let mut config = RunConfig::load(&common.config)?;
    config.apply_overrides(common.seed, common.workers, common.out.clone());
    let plan = config.stream_plan()?;
    let path = config.output_path()?;
    let format = config.format()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| WhmcError::Io(e.to_string()))?;
    let artifact = pool.install(|| -> Result<Artifact> {
        Ok(match command {
            Command::Estimate(_) => cmd_estimate(&config)?.artifact,
            Command::FptimeCdf(_) => cmd_fptime_cdf(&config)?.artifact,
            Command::RateStudy(_) => cmd_rate_study(&config)?.artifact,
            Command::GerberShiu(_) => cmd_gerber_shiu(&config)?.artifact,
        })
    })?;
    artifact.write(&path, format)?;
    Ok(path)
}

/// Full CLI entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(path) => {
            println!("wrote {}", path.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("whmc: {e}");
            exit_code(&e)
        }
    }
}
