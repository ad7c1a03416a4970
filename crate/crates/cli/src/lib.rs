//! Batch front-end for the plr-soliton pipeline: config handling, exports
//! and the subcommands behind the `plr` binary.

pub mod commands;
pub mod config;
pub mod export;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{ConfigDoc, Overrides, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "plr", version, about = "N-soliton curves of the Pohlmeyer-Lund-Regge equation")]
pub struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Built-in parameter set: A..F, plr4 or sg4
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Finite-difference step for verify
    #[arg(long, global = true)]
    pub h: Option<f64>,
    /// Spectral parameter (curve speed)
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter checks
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Tabulate a, u, v, q on the grid (solve.csv)
    Solve,
    /// One time slice with curvature and torsion (curve_t<T>.csv)
    Curve {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Swept surface mesh (surface.obj, surface.csv)
    Surface,
    /// Residual suite (verify.json); exit 2 on failure
    Verify {
        /// Relative distortion of every field, for negative controls
        #[arg(long, allow_negative_numbers = true)]
        perturb: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ParamsAction {
    /// Validate parameters and test the sine-Gordon condition
    Check,
}

pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let doc = match &cli.config {
        Some(path) => ConfigDoc::load(path)?,
        None => ConfigDoc::default(),
    };
    let flags = Overrides { preset: cli.preset.clone(), out_dir: cli.out.clone(), h: cli.h, lambda: cli.lambda };
    RunConfig::resolve(doc, flags)
}

/// Run a parsed command line; returns the outcome and its exit code.
pub fn run(cli: &Cli) -> Result<(commands::Outcome, i32), CliError> {
    let cfg = resolve(cli)?;
    let out = match &cli.command {
        Command::Params { action: ParamsAction::Check } => commands::params_check(&cfg)?,
        Command::Solve => commands::solve(&cfg)?,
        Command::Curve { t } => commands::curve(&cfg, *t)?,
        Command::Surface => commands::surface(&cfg)?,
        Command::Verify { perturb } => commands::verify(&cfg, *perturb)?,
    };
    let code = if out.verification_failed { EXIT_VERIFICATION } else { EXIT_OK };
    Ok((out, code))
}
