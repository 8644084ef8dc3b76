//! `ctxprob`: analyze, simulate and sweep context transitions.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or parse error,
//! 3 inadmissible input. Errors are reported as one line on stderr:
//! `error code=<n> kind=<kind>: <message>`.

mod commands;
mod decimal;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::decimal::Decimal;

#[derive(Debug, Parser)]
#[command(
    name = "ctxprob",
    version,
    about = "Interference of probabilities under context transitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a count file or directly given probabilities.
    Analyze(AnalyzeArgs),
    /// Sample a count file from a scenario; the exact truth goes to stderr.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Tabulate classification and P(B|S) over a grid of lambda values.
    Sweep(SweepArgs),
    /// Print the admissible lambda interval for two primed probabilities.
    Range(RangeArgs),
}

/// A probability flag: its value plus the decimal digits it was written with.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ProbArg {
    pub value: f64,
    pub decimal: Option<Decimal>,
}

fn parse_probability(s: &str) -> Result<ProbArg, String> {
    let value: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("{s} is outside [0, 1]"));
    }
    Ok(ProbArg {
        value,
        decimal: Decimal::parse(s),
    })
}

fn parse_confidence(s: &str) -> Result<f64, String> {
    let c: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if c > 0.0 && c < 1.0 {
        Ok(c)
    } else {
        Err(format!("confidence {s} must lie strictly between 0 and 1"))
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "p_s"]))]
pub(crate) struct AnalyzeArgs {
    /// Count file (`-` for stdin).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// P(B|S).
    #[arg(long = "p-s", value_parser = parse_probability, requires_all = ["p1p", "p2p"], conflicts_with = "input")]
    pub p_s: Option<ProbArg>,
    /// P(B|S1').
    #[arg(long, value_parser = parse_probability, requires = "p_s")]
    pub p1p: Option<ProbArg>,
    /// P(B|S2').
    #[arg(long, value_parser = parse_probability, requires = "p_s")]
    pub p2p: Option<ProbArg>,
    /// P(B|S1); needs --p2 as well.
    #[arg(long, value_parser = parse_probability, requires_all = ["p2", "p_s"])]
    pub p1: Option<ProbArg>,
    /// P(B|S2); needs --p1 as well.
    #[arg(long, value_parser = parse_probability, requires_all = ["p1", "p_s"])]
    pub p2: Option<ProbArg>,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = ctxprob::simulation::DEFAULT_REPLICATES)]
    pub replicates: u32,
    /// Confidence level of the bootstrap intervals.
    #[arg(long, default_value_t = ctxprob::simulation::DEFAULT_CONFIDENCE, value_parser = parse_confidence)]
    pub confidence: f64,
    /// Bootstrap seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// |z| above this marks the additivity check inconsistent.
    #[arg(long, default_value_t = ctxprob::data::DEFAULT_Z_THRESHOLD, value_parser = parse_finite)]
    pub z_threshold: f64,
    /// Report destination (`-` for stdout).
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub(crate) struct SampleArgs {
    /// Trials per context.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Count file destination (`-` for stdout).
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub(crate) enum SimulateCommand {
    /// Two slits: P(B|S1') = p1, P(B|S2') = p2, relative phase theta.
    TwoSlit {
        #[arg(long, value_parser = parse_probability)]
        p1: ProbArg,
        #[arg(long, value_parser = parse_probability)]
        p2: ProbArg,
        #[arg(long, value_parser = parse_finite)]
        theta: f64,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Urn with P(B|S) = p1 + p2 and a hyperbolic coefficient.
    HyperbolicUrn {
        #[arg(long, value_parser = parse_probability)]
        p1: ProbArg,
        #[arg(long, value_parser = parse_probability)]
        p2: ProbArg,
        #[arg(long, value_parser = parse_probability)]
        p1p: ProbArg,
        #[arg(long, value_parser = parse_probability)]
        p2p: ProbArg,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Probabilities given directly.
    Direct {
        #[arg(long = "p-s", value_parser = parse_probability)]
        p_s: ProbArg,
        #[arg(long, value_parser = parse_probability)]
        p1p: ProbArg,
        #[arg(long, value_parser = parse_probability)]
        p2p: ProbArg,
        #[arg(long, value_parser = parse_probability, requires = "p2")]
        p1: Option<ProbArg>,
        #[arg(long, value_parser = parse_probability, requires = "p1")]
        p2: Option<ProbArg>,
        #[command(flatten)]
        sample: SampleArgs,
    },
}

#[derive(Debug, Args)]
pub(crate) struct SweepArgs {
    #[arg(long, value_parser = parse_probability)]
    pub p1p: ProbArg,
    #[arg(long, value_parser = parse_probability)]
    pub p2p: ProbArg,
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub lambda_min: f64,
    #[arg(long, value_parser = parse_finite, allow_negative_numbers = true)]
    pub lambda_max: f64,
    /// Number of grid points, at least 2.
    #[arg(long)]
    pub steps: usize,
    /// CSV destination (`-` for stdout).
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub(crate) struct RangeArgs {
    #[arg(long, value_parser = parse_probability)]
    pub p1p: ProbArg,
    #[arg(long, value_parser = parse_probability)]
    pub p2p: ProbArg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    commands::CliError::usage("missing subcommand; see `ctxprob --help`").report()
                }
                _ => {
                    let rendered = e.to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let message = first.strip_prefix("error: ").unwrap_or(first);
                    commands::CliError::usage(message).report()
                }
            };
        }
    };

    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Simulate(cmd) => commands::simulate(&cmd),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Range(args) => commands::range(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
