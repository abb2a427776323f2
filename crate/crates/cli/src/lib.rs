//! Command-line front end: scenario files, batch runs and figure export.

pub mod commands;
pub mod output;
pub mod scenario_file;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use refgov::prediction::PredictionMethod;

use crate::commands::{RunOptions, EXIT_ERROR};
use crate::output::{parse_formats, Format};
use crate::scenario_file::Overrides;

pub use scenario_file::{parse_scenario, ScenarioError, ScenarioFile};

#[derive(Debug, Parser)]
#[command(name = "refgov", version, about = "Reference-governor motion planning simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Simulate every `*.json` scenario in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check a scenario file and its start conditions.
    Validate { scenario: PathBuf },
    /// Compare travel times over orders and prediction methods.
    Sweep {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        orders: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "lyapunov,vandermonde")]
        methods: Vec<PredictionMethod>,
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output directory; nothing is written without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated artifact formats.
    #[arg(long, default_value = "csv,json,svg", value_parser = parse_formats)]
    pub format: BTreeSet<Format>,
    /// Integrator relative tolerance.
    #[arg(long)]
    pub tol_rel: Option<f64>,
    /// Integrator absolute tolerance.
    #[arg(long)]
    pub tol_abs: Option<f64>,
    /// Simulated time limit in seconds.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Randomize the initial derivatives with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    fn options(self) -> RunOptions {
        RunOptions {
            out: self.out,
            formats: self.format,
            overrides: Overrides { rtol: self.tol_rel, atol: self.tol_abs, horizon: self.horizon },
            seed: self.seed,
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match cli.command {
        Command::Run { scenario, common } => commands::cmd_run(&scenario, &common.options()),
        Command::Batch { dir, parallel, common } => commands::cmd_batch(&dir, parallel, &common.options()),
        Command::Validate { scenario } => commands::cmd_validate(&scenario),
        Command::Sweep { scenario, orders, methods, parallel, common } => {
            commands::cmd_sweep(&scenario, &orders, &methods, parallel, &common.options())
        }
    }
}
