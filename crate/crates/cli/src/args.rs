//! Command-line surface. Every value flag is optional at parse time so a
//! config file can supply it; per-command resolution and validation happen
//! in [`crate::config`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "ptcalogero",
    version,
    about = "Coupled oscillators with balanced loss and gain and an inverse-square interaction",
    long_about = "Classical trajectories, closed-form solutions, equilibrium stability, \
                  perturbation theory and the quantum bound-state spectrum of a pair of \
                  oscillators with balanced loss and gain coupled by an inverse-square \
                  interaction."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the equations of motion and emit the trajectory in both
    /// coordinate frames with conservation diagnostics.
    Simulate(SimulateArgs),
    /// Closed-form solution of the pair-harmonic limit with quadrature and
    /// numeric cross-check columns.
    Exact(ExactArgs),
    /// Equilibrium of the common-trap limit with all three eigenvalue
    /// routes and the stability classification.
    Stability(StabilityArgs),
    /// First-order perturbative solution vs direct integration (comparison
    /// table in lab coordinates).
    Perturb(PerturbArgs),
    /// Quantum bound-state ladder on both branches with the
    /// finite-difference oracle column.
    Spectrum(SpectrumArgs),
    /// Stokes-wedge geometry of the non-normalizable ground state (JSON).
    Wedges(WedgesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

/// Flags every subcommand shares.
#[derive(Debug, Args)]
pub struct IoArgs {
    /// Config file with `key = value` lines (`#` comments); flags override
    /// its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub dump_config: bool,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Fan out runs over one parameter: `name=v1,v2,...` or
    /// `name=start:step:end`. Requires --output.
    #[arg(long, value_name = "SPEC")]
    pub sweep: Option<String>,
}

#[derive(Debug, Args)]
pub struct PhysicsArgs {
    /// Oscillator frequency (> 0).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Balanced loss/gain rate.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Inverse-square coupling strength.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// End of the integration window [0, t-max].
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of equally spaced output samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Relative integrator tolerance.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute integrator tolerance.
    #[arg(long)]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Linear coupling between the oscillators.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Initial relative velocity v2(0).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Initial separation z2(0).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Initial center coordinate z1(0).
    #[arg(long = "z1-0", allow_negative_numbers = true)]
    pub z1_0: Option<f64>,
    /// Initial center velocity v1(0); defaults to -2*gamma*b (the
    /// zero-charge choice).
    #[arg(long = "v1-0", allow_negative_numbers = true)]
    pub v1_0: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Initial relative velocity v2(0).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Initial separation z2(0) (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Integration constant z1(0).
    #[arg(long = "z1-0", allow_negative_numbers = true)]
    pub z1_0: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Number of ladder levels.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Gaussian-scale branch for the quoted ground-state value.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct WedgesArgs {
    /// Balanced loss/gain rate.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Center coordinate z1 entering the linear coefficient (gamma/2) z1.
    #[arg(long = "z1-0", allow_negative_numbers = true)]
    pub z1_0: Option<f64>,
    #[command(flatten)]
    pub io: IoArgs,
}
