//! Command-line driver for the dilute Bose gas numerics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand};

use commands::{CliError, Ctx};
use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "dilute", version, about = "Scattering, Bogoliubov free energy and regime checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV and certificate files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Numerical overrides as key=value: budget, grid, nodes, resample.
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Solve the scattering equation for [potential].
    Scatter,
    /// Regularize [potential] at the [regularize] density and eta.
    Regularize,
    /// Finite-box Bogoliubov free energy.
    Fbog,
    /// Thermodynamic-limit free energy density.
    Fthermo,
    /// Grand-canonical assembly of boxes.
    Assemble,
    /// Neumann-basis diagonalization of a symmetrized bump kernel.
    Symcheck,
    /// Parameter-schedule hypothesis checks.
    Regime,
    /// Run the full acceptance suite.
    Verify,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(anyhow!("thread pool: {e}")))?;
    }
    let tol = Overrides::parse(&cli.tol).map_err(CliError::Usage)?;
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(CliError::Usage)?,
        None if matches!(cli.command, Command::Verify) => RunConfig::default(),
        None => return Err(CliError::Usage(anyhow!("this subcommand needs --config PATH"))),
    };
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Usage(anyhow!("creating output directory {}: {e}", cli.out.display())))?;
    let ctx = Ctx {
        cfg: &cfg,
        tol: &tol,
        out: &cli.out,
        source: cli.config.as_ref().map_or("default".into(), |p| p.display().to_string()),
    };
    match cli.command {
        Command::Scatter => commands::scatter(&ctx),
        Command::Regularize => commands::regularize_cmd(&ctx),
        Command::Fbog => commands::fbog(&ctx),
        Command::Fthermo => commands::fthermo(&ctx),
        Command::Assemble => commands::assemble(&ctx),
        Command::Symcheck => commands::symcheck(&ctx),
        Command::Regime => commands::regime(&ctx),
        Command::Verify => commands::verify_cmd(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more verdicts failed");
            ExitCode::from(1)
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
