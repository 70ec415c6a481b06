//! Command-line layer behind the `robols` binary.
//!
//! Every subcommand is a plain function from its argument struct to an
//! [`Output`], so it can be driven from tests without spawning a process.
//! Exit codes: 0 success, 2 input error, 3 numerical failure, 4 config error.

pub mod commands;
pub mod io;
pub mod manifest;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_diagnose, cmd_empirical, cmd_fit, cmd_mc, cmd_simulate, cmd_tvfit, DiagnoseArgs, EmpiricalArgs, FitArgs, McArgs,
    Output, SimulateArgs, TvFitArgs,
};
pub use manifest::{Experiment, ExperimentManifest};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Config(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::DimensionMismatch(_) | Error::NonFinite { .. } | Error::SeriesTooShort { .. } => CliError::Input(msg),
            Error::RankDeficient { .. }
            | Error::ZeroStandardError { .. }
            | Error::AllPointsFailed
            | Error::FailedPoint { .. }
            | Error::EmptyMask { .. }
            | Error::ZeroVariance
            | Error::ZeroDenominator { .. }
            | Error::TooManyFailures { .. } => CliError::Numerical(msg),
            Error::IndexOutOfRange { .. }
            | Error::InvalidLevel(_)
            | Error::InvalidKernel(_)
            | Error::NonStationary(_)
            | Error::UnknownCatalogId(_)
            | Error::InvalidSpec(_)
            | Error::Config(_) => CliError::Config(msg),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "robols", version, about = "Robust OLS and time-varying OLS for heterogeneous time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed-parameter OLS with robust and standard inference.
    Fit(FitArgs),
    /// Time-varying OLS path with pointwise robust bands.
    Tvfit(TvFitArgs),
    /// Monte Carlo experiment from a JSON manifest.
    Mc(McArgs),
    /// Draw a sample from a catalog model or a JSON model spec.
    Simulate(SimulateArgs),
    /// Standard and robust correlation tests on a series.
    Diagnose(DiagnoseArgs),
    /// Two-stage time-varying analysis of returns.
    Empirical(EmpiricalArgs),
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Tvfit(a) => cmd_tvfit(&a),
        Command::Mc(a) => cmd_mc(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Diagnose(a) => cmd_diagnose(&a),
        Command::Empirical(a) => cmd_empirical(&a),
    }
}

/// Parses `args`, runs the command, prints its output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", out.stdout);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
