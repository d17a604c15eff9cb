use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Hybrid quantum Rabi model: critical points, sweeps, Wigner functions and
/// oracle checks. Frequencies are given as ratios to the field frequency.
#[derive(Debug, Parser)]
#[command(name = "rabi-qpt", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical coupling and the side of the superradiant phase.
    CriticalPoint(PointArgs),
    /// Parameter sweep written as a CSV or JSON table.
    Sweep(SweepArgs),
    /// Wigner function of a field state on a grid, as CSV (x, y, W).
    Wigner(WignerArgs),
    /// Analytic-versus-numeric checks at one parameter point.
    Validate(ValidateArgs),
}

/// Options shared by every command. Each may also come from `--config`.
#[derive(Debug, Args)]
pub struct Common {
    /// Flat JSON object keyed by long flag names; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Qubit splitting Ω/ω.
    #[arg(long = "Omega-ratio", alias = "Omega")]
    pub omega_ratio: Option<f64>,
    #[arg(long)]
    pub chi: Option<f64>,
    /// Strength of the A² term.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Ancilla coupling g0/ω.
    #[arg(long = "g0-ratio", alias = "g0")]
    pub g0_ratio: Option<f64>,
    /// Ancilla frequency ω_a/ω (default 1).
    #[arg(long = "omega-a-ratio")]
    pub omega_a_ratio: Option<f64>,
    /// Fock levels per spin, or `auto`.
    #[arg(long = "fock-dim")]
    pub fock_dim: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Omit the generation-time line so repeated runs are byte-identical.
    #[arg(long = "no-timestamp")]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ancilla photon number.
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// `name:start:stop:points` with name one of chi, g0_over_omega, Omega_over_omega.
    #[arg(long, allow_hyphen_values = true)]
    pub axis: Option<String>,
    /// Optional second axis, same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub axis2: Option<String>,
    /// Comma-separated ancilla photon numbers.
    #[arg(long)]
    pub n: Option<String>,
    /// Comma-separated quantity names.
    #[arg(long)]
    pub quantities: Option<String>,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<u32>,
    /// numeric_ground, G0, G1, cat_plus, cat_minus or projected.
    #[arg(long)]
    pub state: Option<String>,
    /// Samples per axis.
    #[arg(long = "grid-points")]
    pub grid_points: Option<usize>,
    /// `min:max`; both ranges must be given to fix the grid.
    #[arg(long = "x-range", allow_hyphen_values = true)]
    pub x_range: Option<String>,
    #[arg(long = "y-range", allow_hyphen_values = true)]
    pub y_range: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<u32>,
    /// Largest accepted relative ψ_q error.
    #[arg(long = "psi-tol")]
    pub psi_tol: Option<f64>,
    /// Smallest accepted fidelity with the analytic ground state.
    #[arg(long = "fidelity-min")]
    pub fidelity_min: Option<f64>,
}
