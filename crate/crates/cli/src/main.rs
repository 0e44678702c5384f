//! `mcvi`: build the Maritime Connectivity Vulnerability Index from CSV
//! datasets and run its analysis battery.

mod manifest;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mcvi_core::normalize::NormalizationMethod;

#[derive(Parser)]
#[command(
    name = "mcvi",
    version,
    about = "Maritime Connectivity Vulnerability Index pipeline",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Directory holding lsci.csv, lsbci.csv, plsci.csv,
    /// classifications.csv, and optionally external.csv
    #[arg(long, value_name = "DIR")]
    input: PathBuf,
    /// Output directory (created if absent)
    #[arg(long, value_name = "DIR")]
    output: PathBuf,
    /// Normalization method for the index build
    #[arg(long, default_value = "pooled-rank", value_parser = parse_method)]
    method: NormalizationMethod,
    /// Aggregation weights: "equal", "pca", or three comma-separated
    /// nonnegative numbers (normalized to sum 1)
    #[arg(long, default_value = "equal", value_parser = parse_weights)]
    weights: WeightsArg,
    /// Minimum covered years before a country escapes the low-coverage flag
    #[arg(long, default_value_t = 1)]
    min_years: usize,
    /// Monte Carlo simulation count
    #[arg(long, default_value_t = 1000)]
    sims: usize,
    /// Dirichlet concentration for weight sampling
    #[arg(long, default_value_t = 20.0)]
    alpha: f64,
    /// Half-width of the multiplicative indicator noise band
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Probability of switching to within-year normalization per simulation
    #[arg(long, default_value_t = 0.30)]
    pswitch: f64,
    /// Root seed; all randomness flows from here
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
enum WeightsArg {
    Equal,
    Pca,
    Custom([f64; 3]),
}

fn parse_weights(s: &str) -> Result<WeightsArg, String> {
    match s {
        "equal" => Ok(WeightsArg::Equal),
        "pca" => Ok(WeightsArg::Pca),
        other => {
            let parts: Vec<&str> = other.split(',').collect();
            if parts.len() != 3 {
                return Err(format!(
                    "expected 'equal', 'pca', or three comma-separated numbers, got '{other}'"
                ));
            }
            let mut w = [0.0; 3];
            for (slot, part) in w.iter_mut().zip(&parts) {
                *slot = part
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("'{part}' is not a number"))?;
            }
            Ok(WeightsArg::Custom(w))
        }
    }
}

fn parse_method(s: &str) -> Result<NormalizationMethod, String> {
    match s {
        "pooled-rank" => Ok(NormalizationMethod::PooledRank),
        "within-year" => Ok(NormalizationMethod::WithinYearRank),
        "minmax" => Ok(NormalizationMethod::PooledMinMax),
        other => Err(format!(
            "unknown method '{other}' (expected pooled-rank, within-year, or minmax)"
        )),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the index panel and country ranking
    Build(RunArgs),
    /// Ranking robustness under alternative specifications
    Robustness(RunArgs),
    /// Monte Carlo uncertainty propagation and variance decomposition
    Montecarlo(RunArgs),
    /// Dominant dimensions and k-means vulnerability profiles
    Decompose(RunArgs),
    /// Convergent validity and the panel regression battery
    Validate(RunArgs),
    /// Disruption event studies
    Events(RunArgs),
    /// Run every stage and emit the full artifact set
    Report(RunArgs),
    /// Write a deterministic synthetic dataset
    Fixture {
        /// Number of economies (at least 4)
        #[arg(long, default_value_t = 20)]
        economies: usize,
        /// Number of years starting at 2006 (2 to 20)
        #[arg(long, default_value_t = 5)]
        years: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory (created if absent)
        #[arg(long, value_name = "DIR")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => pipeline::run(&args, pipeline::Selection::Build),
        Command::Robustness(args) => pipeline::run(&args, pipeline::Selection::Robustness),
        Command::Montecarlo(args) => pipeline::run(&args, pipeline::Selection::MonteCarlo),
        Command::Decompose(args) => pipeline::run(&args, pipeline::Selection::Decompose),
        Command::Validate(args) => pipeline::run(&args, pipeline::Selection::Validate),
        Command::Events(args) => pipeline::run(&args, pipeline::Selection::Events),
        Command::Report(args) => pipeline::run(&args, pipeline::Selection::Report),
        Command::Fixture {
            economies,
            years,
            seed,
            output,
        } => pipeline::write_fixture(economies, years, seed, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
