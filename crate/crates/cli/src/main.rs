//! `ingms`: rate regions, membership, coding simulation and diagnostics.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ingms_core::LambdaOrder;

use commands::{CoveringArgs, RegionArgs, SimulateArgs};
use inputs::Kind;

/// Exit code for a diagnostic that ran and failed.
const EXIT_CHECK_FAILED: u8 = 2;
/// Exit code for I/O, parse and computation errors.
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "ingms", version, about = "Rate regions and random-coding simulation for interference networks with general message sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a region as inequality text (and its constants as JSON with --out).
    Region {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        factorization: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ingms-projected")]
        kind: Kind,
        /// Move common rate into the private rates of each message triple.
        #[arg(long)]
        enlarge: bool,
        /// Output stem: writes STEM.txt, STEM.constants.json, STEM.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a rate point lies in a region.
    Member {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        factorization: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ingms-projected")]
        kind: Kind,
        #[arg(long)]
        enlarge: bool,
        /// Rates as NAME=VALUE pairs; unlisted rates are zero.
        #[arg(long, default_value = "")]
        rates: String,
    },
    /// Monte Carlo run of the random coding scheme.
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        factorization: PathBuf,
        #[arg(long, default_value = "")]
        rates: String,
        /// Bin rates as NAME=VALUE pairs (B01..B22); unlisted bins are zero.
        #[arg(long, default_value = "")]
        bins: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tie-break order of the bin search: lex or colex.
        #[arg(long, default_value = "lex", value_parser = parse_order)]
        order: LambdaOrder,
        /// Output stem: writes STEM.csv, STEM.json, STEM.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical covering experiment for the W1, U1, V1 codebooks.
    Covering {
        #[arg(long)]
        factorization: PathBuf,
        /// Bin rates B10, B11, B12 as NAME=VALUE pairs.
        #[arg(long)]
        bins: Option<String>,
        /// Bins as this multiple of the smallest covering bins.
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        /// Premise slack; defaults to 0.9 * epsilon.
        #[arg(long)]
        epsilon1: Option<f64>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output stem: writes STEM.json, STEM.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the diagnostic suites.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output stem: writes STEM.txt, STEM.manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_order(s: &str) -> Result<LambdaOrder, String> {
    LambdaOrder::parse(s).ok_or_else(|| format!("unknown order {s:?} (lex or colex)"))
}

fn run(cmd: Cmd) -> anyhow::Result<bool> {
    match cmd {
        Cmd::Region { channel, factorization, kind, enlarge, out } => {
            let a = RegionArgs { channel: &channel, factorization: factorization.as_ref(), kind, enlarge };
            commands::region(a, out.as_ref())?;
        }
        Cmd::Member { channel, factorization, kind, enlarge, rates } => {
            let a = RegionArgs { channel: &channel, factorization: factorization.as_ref(), kind, enlarge };
            commands::member(a, &rates)?;
        }
        Cmd::Simulate { channel, factorization, rates, bins, n, epsilon, trials, seed, order, out } => {
            let a = SimulateArgs {
                channel: &channel,
                factorization: &factorization,
                rates: &rates,
                bins: &bins,
                n,
                epsilon,
                trials,
                seed,
                order,
            };
            commands::simulate(a, out.as_ref())?;
        }
        Cmd::Covering { factorization, bins, scale, n, epsilon, epsilon1, trials, seed, out } => {
            let a = CoveringArgs {
                factorization: &factorization,
                bins: bins.as_deref(),
                scale,
                n,
                epsilon,
                epsilon1,
                trials,
                seed,
            };
            commands::covering(a, out.as_ref())?;
        }
        Cmd::Check { seed, out } => return commands::check(seed, out.as_ref()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
