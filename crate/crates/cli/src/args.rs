use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qphase::extraction::Branch;
use qphase::qpe::{DEFAULT_COUNTING_QUBITS, DEFAULT_COVERAGE_THRESHOLD, DEFAULT_SHOTS};
use qphase::sampling::Mode;

use crate::angle::{AngleExpr, AngleRange};

#[derive(Debug, Parser)]
#[command(
    name = "qphase",
    version,
    about = "Non-Abelian geometric phase of a spin-1/2 measured by phase estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form amplitudes and phase for a path, no simulation.
    Analytic(AnalyticArgs),
    /// QPE readout of C² and S² after leg 1 (y-axis auxiliary rotation).
    Qpev(QpevArgs),
    /// QPE readout of |A|²/2 and |B|²/2 after both legs (x-axis auxiliary rotation).
    Qpeh(QpehArgs),
    /// Both registers plus inversion for δ and θ.
    Pipeline(PipelineArgs),
    /// Pipeline over an η × δ grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Principal,
    Reflected,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Principal => Branch::Principal,
            BranchArg::Reflected => Branch::Reflected,
        }
    }
}

impl BranchArg {
    pub fn name(self) -> &'static str {
        match self {
            BranchArg::Principal => "principal",
            BranchArg::Reflected => "reflected",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Readout {
    /// Counting qubits.
    #[arg(long, default_value_t = DEFAULT_COUNTING_QUBITS)]
    pub n: usize,
    /// Number of shots; selects sampled mode.
    #[arg(long, conflicts_with = "exact")]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact readout probabilities instead of sampling.
    #[arg(long)]
    pub exact: bool,
    /// Half-width of the bin window summed around each expected peak.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_COVERAGE_THRESHOLD)]
    pub coverage_threshold: f64,
    /// Accept auxiliary angles whose eigenphases are not on the n-bit grid.
    #[arg(long)]
    pub allow_leakage: bool,
}

impl Readout {
    /// Resolved mode and shot count. Single-register commands sample by
    /// default; the pipeline is exact unless `--shots` is given.
    pub fn mode(&self, sample_by_default: bool) -> (Mode, u64) {
        match (self.exact, self.shots) {
            (true, _) => (Mode::Exact, 0),
            (false, Some(s)) => (Mode::Sampled, s),
            (false, None) if sample_by_default => (Mode::Sampled, DEFAULT_SHOTS),
            (false, None) => (Mode::Exact, 0),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eta: AngleExpr,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: AngleExpr,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct QpevArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eta: AngleExpr,
    /// Auxiliary y-rotation angle.
    #[arg(long, allow_hyphen_values = true, default_value = "pi/4")]
    pub aux: AngleExpr,
    #[command(flatten)]
    pub readout: Readout,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct QpehArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eta: AngleExpr,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: AngleExpr,
    /// Auxiliary x-rotation angle.
    #[arg(long, allow_hyphen_values = true, default_value = "pi/4")]
    pub aux: AngleExpr,
    #[command(flatten)]
    pub readout: Readout,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eta: AngleExpr,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: AngleExpr,
    #[arg(long, allow_hyphen_values = true, default_value = "pi/4")]
    pub aux_v: AngleExpr,
    #[arg(long, allow_hyphen_values = true, default_value = "pi/4")]
    pub aux_h: AngleExpr,
    #[arg(long, value_enum, default_value_t = BranchArg::Principal)]
    pub branch: BranchArg,
    #[command(flatten)]
    pub readout: Readout,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// `MIN:MAX`, inside (-pi/2, pi/2).
    #[arg(long, allow_hyphen_values = true)]
    pub eta_range: AngleRange,
    /// `MIN:MAX`, inside (-pi/2, pi/2).
    #[arg(long, allow_hyphen_values = true)]
    pub delta_range: AngleRange,
    /// Points per axis.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub steps: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "pi/4")]
    pub aux_v: AngleExpr,
    #[arg(long, allow_hyphen_values = true, default_value = "pi/4")]
    pub aux_h: AngleExpr,
    #[arg(long, value_enum, default_value_t = BranchArg::Principal)]
    pub branch: BranchArg,
    #[command(flatten)]
    pub readout: Readout,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
