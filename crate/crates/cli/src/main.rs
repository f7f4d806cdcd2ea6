//! `parrondo-qw`: run Parrondo games of quantum-walk search from a config file.
//!
//! Exit codes: 0 success, 1 check failed (theorem/parity/oracle violation or
//! an output write error), 2 invalid config or unmet precondition, 3 numeric
//! failure during evolution.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "parrondo-qw",
    version,
    about = "Parrondo games of quantum-walk search on tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play one game: traces for U1, U2 and the combined schedule, plus the verdict.
    Simulate(CommonArgs),
    /// Sweep the θ of the second coin over [0, 2π).
    Sweep(CommonArgs),
    /// Check the even-side sign-flip identity and the parity zero pattern.
    Verify(CommonArgs),
    /// Cross-check the fast evolution against dense matrices.
    OracleCheck(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `[output] dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of θ grid points (overrides `game.resolution`).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Worker threads; 0 uses every available processor.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Classification guard band (overrides the command's guard).
    #[arg(long)]
    pub guard: Option<f64>,
    /// Seed for random initial states (overrides `game.seed`).
    #[arg(long)]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Verify(args) => commands::verify(args),
        Command::OracleCheck(args) => commands::oracle_check(args),
    };
    match result {
        Ok(code) => code.into(),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code.into()
        }
    }
}
