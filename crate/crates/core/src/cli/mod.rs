//! Command-line front end: `solve`, `synth`, `verify` and `sweep`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{OutputDir, OutputEntry, RunManifest, MANIFEST};

use crate::config::NetKind;

#[derive(Debug, Parser)]
#[command(
    name = "rdnet",
    version,
    about = "Fisher-KPP solver, constructive networks and bound checks"
)]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; files from an earlier run listed in its manifest are replaced.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Probe seed (default 42, or `seed` from the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random probes (default 10000, or `probes` from the config).
    #[arg(long, global = true)]
    pub probes: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve to steady state and write the field CSV (plus snapshots).
    Solve,
    /// Build a network from a solved field and dump its probe errors.
    Synth(SynthArgs),
    /// Run one verifier and write its JSON report.
    Verify(VerifyArgs),
    /// Repeat a verifier over values of one parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Threshold,
    Selector,
}

impl From<KindArg> for NetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Threshold => NetKind::Threshold,
            KindArg::Selector => NetKind::Selector,
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Field CSV to approximate; solved from the config when absent.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Load this net JSON instead of constructing one.
    #[arg(long)]
    pub net: Option<PathBuf>,
    /// Target sup error (threshold net, or sets delta for a 2D epsilon sweep).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest rectangle side of the selector partition.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Selector ramp width; defaults to 1e-3 of the smallest side.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    T1,
    T2,
    L1,
    L2l3,
    Order,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub theorem: Theorem,
    /// Field CSV to verify; solved from the config when absent.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Target sup error (threshold net, or sets delta for a 2D epsilon sweep).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest rectangle side of the selector partition.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Selector ramp width; defaults to 1e-3 of the smallest side.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Cells per axis of the stitching tiling, e.g. `4,2`.
    #[arg(long, value_delimiter = ',')]
    pub tiling: Option<Vec<usize>>,
    /// Grid sizes for the order check, e.g. `33,65,129`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Keep the measured runtime in the report (otherwise 0, so reruns are byte-identical).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Epsilon,
    Delta,
    R,
    N,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub axis: Axis,
    /// Comma-separated values; falls back to `sweep.values` in the config.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Target sup error (threshold net, or sets delta for a 2D epsilon sweep).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest rectangle side of the selector partition.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Selector ramp width; defaults to 1e-3 of the smallest side.
    #[arg(long)]
    pub gamma: Option<f64>,
}

/// Parses the process arguments, runs the command and maps the outcome to
/// the exit-code contract: 0 all checks pass, 1 a check fails or the solver
/// does not converge, 2 bad configuration or input.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
