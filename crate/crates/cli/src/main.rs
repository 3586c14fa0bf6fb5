//! `stealth-gain`: stealthy-attack and undetectable-fault gain analysis
//! from the command line.
//!
//! Exit status: 0 success, 1 a checked property failed, 2 invalid input,
//! 3 degenerate system (a root on the imaginary axis).

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stealth_gain::DEFAULT_AXIS_TOL;

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "stealth-gain", version, about = "Gain bounds for stealthy attacks and undetectable faults")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gain, classical bracket and limitation bound of one system.
    Analyze(AnalyzeArgs),
    /// Zeros of 1 - S and the limitation bound over a range of tau.
    Sweep(SweepArgs),
    /// Magnitudes of the ratio and both channels on a log grid.
    Bode(BodeArgs),
    /// Time-domain signals attaining the gain, with a JSON summary.
    Witness(WitnessArgs),
    /// Checks the Poisson identity on random minimum-phase systems.
    PoissonCheck(PoissonArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// TOML system description.
    config: PathBuf,
    /// Half-width of the band around the imaginary axis treated as on it.
    #[arg(long, default_value_t = DEFAULT_AXIS_TOL)]
    axis_tol: f64,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Overrides the configured value of TAU.
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Report file; defaults to analysis.json or analysis.csv in the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Swept parameter; only `tau` exists.
    #[arg(long, default_value = "tau")]
    param: String,
    #[arg(long, default_value_t = -20.0, allow_negative_numbers = true)]
    min: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    max: f64,
    /// Number of grid points, ends included.
    #[arg(long, default_value_t = 401)]
    steps: usize,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BodeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    wmin: f64,
    #[arg(long, default_value_t = 1e3, allow_negative_numbers = true)]
    wmax: f64,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// CSV file; defaults to bode.csv in the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Signal length in seconds; defaults to 100 periods of the excitation.
    #[arg(long, allow_negative_numbers = true)]
    horizon: Option<f64>,
    /// Sample spacing; defaults to 512 samples per period.
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PoissonArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Roots with |Re| below this fraction of max(1, |root|) are rejected as degenerate.
    #[arg(long, default_value_t = 1e-4)]
    margin: f64,
    /// Adds one system with a zero pair at -1e-6 ± j to exercise the rejection path.
    #[arg(long)]
    adversarial: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze::run(&a),
        Command::Sweep(a) => commands::sweep::run(&a),
        Command::Bode(a) => commands::bode::run(&a),
        Command::Witness(a) => commands::witness::run(&a),
        Command::PoissonCheck(a) => commands::poisson::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stealth-gain: {e}");
            e.exit_code()
        }
    }
}

fn check_axis_tol(v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("--axis-tol must be finite and nonnegative, got {v}")))
    }
}
