//! `stieltjes-cf`: certify and expand class-G functions stored as JSON
//! documents, and evaluate two-phase composite formulas.
//!
//! Exit status is 0 when every check passes, 1 when a well-formed input
//! fails a check, and 2 for usage, parse or I/O errors.

mod certify;
mod composite;
mod document;
mod error;
mod expand;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stieltjes_cf::{Tolerances, VERIFICATION_COUNT, VERIFICATION_SEED};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "stieltjes-cf", version, about, propagate_version = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Each flag can also be set through `STIELTJES_CF_<FLAG>`; the flag wins.
#[derive(Args)]
struct GlobalArgs {
    /// PSD tolerance, relative to max(1, ||M||)
    #[arg(long, global = true, env = "STIELTJES_CF_TOL_PSD", default_value_t = Tolerances::DEFAULT.psd)]
    tol_psd: f64,
    /// Rank cutoff, relative to the largest eigenvalue
    #[arg(long, global = true, env = "STIELTJES_CF_TOL_RANK", default_value_t = Tolerances::DEFAULT.rank)]
    tol_rank: f64,
    /// Number of sample points
    #[arg(long, global = true, env = "STIELTJES_CF_SAMPLES", default_value_t = VERIFICATION_COUNT)]
    samples: usize,
    /// Seed of the sample points
    #[arg(long, global = true, env = "STIELTJES_CF_SEED", default_value_t = VERIFICATION_SEED)]
    seed: u64,
    /// Write the main output here instead of stdout
    #[arg(long, short, global = true, env = "STIELTJES_CF_OUTPUT")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check class membership and sample both positivity kernels
    Certify {
        /// Function document (JSON)
        input: PathBuf,
    },
    /// Expand into a continued fraction and report the round-trip error
    Expand {
        /// Function document (JSON)
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = expand::Format::Jfraction)]
        format: expand::Format,
    },
    /// Two-phase composite formulas
    #[command(subcommand)]
    Composite(composite::Composite),
}

pub struct Settings {
    pub tol: Tolerances,
    pub samples: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Settings {
    fn from_args(args: GlobalArgs) -> Result<Self, CliError> {
        for (name, value) in [("--tol-psd", args.tol_psd), ("--tol-rank", args.tol_rank)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError::Usage(format!("{name} must be positive, got {value}")));
            }
        }
        if args.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".to_owned()));
        }
        Ok(Self {
            tol: Tolerances::DEFAULT.with_psd(args.tol_psd).with_rank(args.tol_rank),
            samples: args.samples,
            seed: args.seed,
            output: args.output,
        })
    }

    /// Writes to `--output` when given, otherwise to stdout.
    pub fn emit(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.output {
            Some(path) => write_file(path, bytes),
            None => {
                std::io::stdout().write_all(bytes).map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
            }
        }
    }
}

pub fn read_input(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))?;
    Ok((bytes, text))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let settings = Settings::from_args(cli.global)?;
    let report = match cli.command {
        Command::Certify { input } => certify::run(&input, &settings)?,
        Command::Expand { input, format } => expand::run(&input, format, &settings)?,
        Command::Composite(command) => return composite::run(&command, &settings),
    };
    settings.emit(report.to_json().as_bytes())?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("stieltjes-cf: {e}");
            e.exit_code()
        }
    }
}
