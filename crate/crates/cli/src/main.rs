//! `annosched` command-line entry point.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Environment variable naming the default output root.
pub const OUT_DIR_ENV: &str = "ANNOSCHED_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "annosched-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error(transparent)]
    Core(#[from] annosched_core::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    /// 2 for invalid configuration, 3 for a missing input file, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use annosched_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Core(E::InvalidParameter { .. }) => 2,
            CliError::MissingInput(_) | CliError::Core(E::MissingInput(_)) => 3,
            _ => 1,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Other(format!("{}: {e}", path.display()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "annosched",
    version,
    about = "Error-aware annotation scheduling: stream simulations and annotation-order experiments",
    after_long_help = AFTER_HELP.as_str()
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

static AFTER_HELP: std::sync::LazyLock<String> = std::sync::LazyLock::new(|| {
    format!(
        "Precedence: command-line flags > --config file > built-in defaults.\n\
         Output root: --out > output.dir > ${OUT_DIR_ENV} > ./{DEFAULT_OUT_DIR}.\n\
         Exit codes: 0 success, 1 runtime failure, 2 invalid configuration, 3 missing input file.\n\n{}",
        config::keys_help()
    )
});

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Configuration file of `key = value` lines
    #[arg(long, global = true, help_heading = "Global options", value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed; the split, model, oracle and sampler seeds are seed+0..3
    #[arg(long, global = true, help_heading = "Global options")]
    pub seed: Option<u64>,
    /// Output directory (for `schedule`, a path ending in .json names the file)
    #[arg(long, global = true, help_heading = "Global options", value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// More log output (-v info, -vv debug)
    #[arg(short, long, global = true, help_heading = "Global options", action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read and filter a labelled stream file
    Ingest(commands::IngestArgs),
    /// Run one active-learning simulation
    Simulate(commands::SimulateArgs),
    /// Run several policies and decay presets on the same data and seeds
    Compare(commands::CompareArgs),
    /// Build a slip, mistake or lab annotation schedule
    Schedule(commands::ScheduleArgs),
    /// Error rates by position or by gap from judge responses
    Analyze(commands::AnalyzeArgs),
    /// Write a synthetic drifting stream as JSON lines
    GenSynthetic(commands::GenSyntheticArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
