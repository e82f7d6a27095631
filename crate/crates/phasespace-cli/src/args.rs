//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "phasespace", version, about = "Phase-space quantum mechanics on a grid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wigner function of a level (oscillator, circle) or an energy shell
    /// (free particle, linear potential).
    Wigner(WignerArgs),
    /// Star exponential at a fixed time, from the propagator.
    Starexp(StarexpArgs),
    /// Propagator sampled on x_f x x_0.
    Propagator(PropagatorArgs),
    /// Star product of two polynomial symbols.
    Star(StarArgs),
    /// Levels of a discrete spectrum projected from the star exponential.
    Spectrum(SpectrumArgs),
    /// Run the acceptance suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Planck constant.
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Left edge of the position axis; -8, or -pi for the circle.
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    /// Right edge; 8, or pi for the circle.
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    /// Points per axis (even).
    #[arg(long, default_value_t = 64)]
    pub n_x: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Free,
    Ho,
    Linear,
    Circle,
    Quadratic,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Mass.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// Oscillator frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Moment of inertia (circle).
    #[arg(long, default_value_t = 1.0)]
    pub inertia: f64,
    /// Angular-momentum cutoff (circle).
    #[arg(long, default_value_t = 20)]
    pub nmax: usize,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Level index (oscillator, circle).
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Shell energy (free particle, linear potential).
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Gaussian time damping; without it the result is extrapolated to zero damping.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Half-width of the time window; defaults to 5/eps.
    #[arg(long)]
    pub t_window: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteName {
    Fresnel,
    Fft,
}

#[derive(Debug, Args)]
pub struct StarexpArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = RouteName::Fresnel)]
    pub route: RouteName,
}

#[derive(Debug, Args)]
pub struct PropagatorArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Spring coefficient c(t) of a quadratic Lagrangian: a polynomial in t;
    /// `omega2` stands for m omega^2.
    #[arg(long, default_value = "0")]
    pub c: String,
    /// Force f(t), a polynomial in t.
    #[arg(long, default_value = "0")]
    pub f: String,
    /// Evaluate the quadratic family by time slicing with this many slices.
    #[arg(long)]
    pub slices: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StarRoute {
    Poly,
    Kernel,
    Integral,
    Path,
}

#[derive(Debug, Args)]
pub struct StarArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Left factor, a polynomial in x (or q) and p.
    #[arg(long)]
    pub f: String,
    /// Right factor.
    #[arg(long)]
    pub g: String,
    #[arg(long, value_enum, default_value_t = StarRoute::Poly)]
    pub route: StarRoute,
    /// Grid routes: plateau half-width of the taper, as a fraction of the half-range.
    #[arg(long, default_value_t = 0.8)]
    pub taper_edge: f64,
    /// Grid routes: taper transition width, same units; keep it at least 4/n_x.
    #[arg(long, default_value_t = 0.05)]
    pub taper_soft: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of levels.
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = SuiteName::Quick)]
    pub suite: SuiteName,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run only this criterion.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub criterion: Option<u8>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
