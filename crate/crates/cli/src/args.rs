use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use noma_core::ThroughputPairing;

#[derive(Debug, Parser)]
#[command(name = "noma", version, about = "Outage analysis for unified code-/power-domain NOMA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and asymptotic COP over an SNR grid.
    Analytic(CommonArgs),
    /// Analytic values plus Monte Carlo estimates.
    Simulate(CommonArgs),
    /// Analytic-versus-simulation report; exits 1 on disagreement.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Relative tolerance applied alongside three standard errors.
        #[arg(long, default_value_t = 0.05)]
        rel_tol: f64,
    },
    /// Sweep over SNR, power factor theta or common target rate.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = AxisArg::SnrDb)]
        axis: AxisArg,
        /// `start:stop:step` grid for the theta or rate axis.
        #[arg(long)]
        grid: Option<String>,
        /// Fixed SNR in dB for the theta and rate axes.
        #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
        at_snr_db: f64,
        #[arg(long, value_enum, default_value_t = QuantityArg::Cop)]
        quantity: QuantityArg,
    },
    /// Reproduce one of the preset figures (2 to 9).
    Figure {
        /// Figure number.
        number: Option<u8>,
        #[arg(long = "figure")]
        figure: Option<u8>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    SnrDb,
    Theta,
    Rate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Cop,
    Throughput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PairingArg {
    AsPrinted,
    Conventional,
}

impl From<PairingArg> for ThroughputPairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::AsPrinted => ThroughputPairing::AsPrinted,
            PairingArg::Conventional => ThroughputPairing::Conventional,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON parameter file; its fields override the built-in defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// SNR grid in dB as `start:stop:step` (or a single value).
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// Monte Carlo trials per grid point.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated modes, e.g. `m,n-ipsic-alf,pair-psic-exf`, or `all`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Number of users `M`.
    #[arg(long)]
    pub users: Option<usize>,
    /// Subcarriers `K` (1 selects power-domain NOMA).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub rank_m: Option<usize>,
    #[arg(long)]
    pub rank_n: Option<usize>,
    #[arg(long)]
    pub a_m: Option<f64>,
    #[arg(long)]
    pub a_n: Option<f64>,
    /// Target rate of the `m`-th user, BPCU.
    #[arg(long)]
    pub r_m: Option<f64>,
    /// Target rate of the `n`-th user, BPCU.
    #[arg(long)]
    pub r_n: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Disk radius in meters.
    #[arg(long)]
    pub r_d: Option<f64>,
    /// Residual-interference power in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub ri_db: Option<f64>,
    #[arg(long)]
    pub cheb_nodes: Option<usize>,
    #[arg(long)]
    pub semi_nodes: Option<usize>,
    #[arg(long, value_enum)]
    pub throughput_pairing: Option<PairingArg>,
}
