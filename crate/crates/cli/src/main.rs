//! `qlnet` command line: every subcommand writes a CSV table, a JSON summary
//! and a manifest (resolved config, seeds, SHA-256 of each artifact) into
//! the output directory.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 1 anything
//! else (I/O).

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::*;

#[derive(Debug, Parser)]
#[command(name = "qlnet", version, about = "Q-Learning on network polymatrix games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run Q-Learning from random starts and record trajectories.
    Simulate(SimulateArgs),
    /// Influence bounds and the sufficient exploration thresholds.
    Bounds(BoundsArgs),
    /// QRE residual, ε and exploitability of a given joint strategy.
    Report(ReportArgs),
    /// Empirical stability boundary over agent counts.
    Sweep(SweepArgs),
    /// Window boxplot statistics of action probabilities.
    Spread(SpreadArgs),
    /// Exploration annealing on one game.
    Anneal(AnnealArgs),
    /// Exploration annealing over a batch of random games.
    Batch(BatchArgs),
    /// Threshold curves over topologies and agent counts.
    Curves(CurvesArgs),
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl From<qlnet::Error> for CliError {
    fn from(e: qlnet::Error) -> Self {
        use qlnet::Error::*;
        match e {
            Numerical { .. } | NonConvergence { .. } | InitialNotConverged { .. } => {
                CliError::Numerical(e.to_string())
            }
            e if e.is_validation() => CliError::Validation(e.to_string()),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Bounds(a) => bounds(a),
        Command::Report(a) => report(a),
        Command::Sweep(a) => sweep(a),
        Command::Spread(a) => spread(a),
        Command::Anneal(a) => anneal(a),
        Command::Batch(a) => batch(a),
        Command::Curves(a) => curves(a),
    };
    match result {
        Ok(dir) => {
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qlnet: {e}");
            ExitCode::from(e.code())
        }
    }
}
