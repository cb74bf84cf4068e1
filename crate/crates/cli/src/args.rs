//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "sqzbpsk", version, about = "Error limits for coherent and squeezed phase-shift keying")]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homodyne and Helstrom bounds, coherent and squeezed, with mutual information.
    Bounds(CommonArgs),
    /// Model (and optionally Monte Carlo) error over an n̄ × γ × loss grid.
    Sweep(CommonArgs),
    /// Three-phase keying error by planar and phase-angle integration.
    Psk3(Psk3Args),
    /// Sweep with three-level amplitude keying.
    Ask3(CommonArgs),
    /// Sweep with four-phase keying.
    Psk4(CommonArgs),
    /// Monte Carlo receiver simulation over a grid.
    Mc(McArgs),
    /// Error estimate from two files of measured homodyne outcomes.
    Analyze(AnalyzeArgs),
    /// Mean photon number where the squeezed homodyne limit meets the coherent Helstrom bound.
    Crossover(OutArgs),
}

/// Settings shared by the grid commands; each overrides the config key of the same meaning.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Alphabet: bpsk, ask3, psk3 or psk4.
    #[arg(long)]
    pub format: Option<String>,
    /// Master seed for Monte Carlo streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo transmissions per symbol; enables the Monte Carlo columns.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Channel loss values, e.g. `0,0.25,0.5`.
    #[arg(long, allow_hyphen_values = true)]
    pub loss: Option<String>,
    /// Squeezing fractions or `optimal`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["squeezing_db", "squeezing_r"])]
    pub gamma: Option<String>,
    /// Mean photon numbers: values or `start:stop:points` ranges, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: Option<String>,
    /// Fixed squeezing in dB of noise reduction.
    #[arg(long, conflicts_with = "squeezing_r")]
    pub squeezing_db: Option<f64>,
    /// Fixed squeezing parameter r.
    #[arg(long)]
    pub squeezing_r: Option<f64>,
    /// Homodyne visibility.
    #[arg(long)]
    pub visibility: Option<f64>,
    /// Thermal noise factor of the squeezed state.
    #[arg(long)]
    pub vth: Option<f64>,
    /// Electronic noise of the detector, in shot-noise units.
    #[arg(long)]
    pub ven: Option<f64>,
    /// Photon-number model: published or exact.
    #[arg(long)]
    pub energy_model: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Psk3Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Integration methods to tabulate: quadrature, phase.
    #[arg(long, value_delimiter = ',', default_value = "quadrature,phase")]
    pub methods: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Write the binary-keying outcomes of every point to this directory.
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Outcomes recorded while symbol 0 was sent, one per line.
    pub file_0: PathBuf,
    /// Outcomes recorded while symbol 1 was sent, one per line.
    pub file_1: PathBuf,
    /// Output CSV (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutArgs {
    /// Output CSV (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}
