//! Command-line front end. Every command produces a [`ResultRecord`]
//! (`{config, results, provenance}`); sweeps can also be written as CSV.

mod commands;
mod record;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DEFAULT_K_MAX;
use crate::error::{Error, Result};
use crate::exact::Scalar;

pub use commands::{grid_axis, PhaseRow};
pub use record::{Provenance, ResultRecord, RunConfig};

#[derive(Parser, Debug, Clone)]
#[command(name = "bergman-qc", version, about = "Capacity, Wiener-type Bergman criteria and qc transport for slit discs")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonArgs {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Arcs kept when a truncated D^{r,t} is built.
    #[arg(long, global = true, default_value_t = DEFAULT_K_MAX)]
    pub kmax: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Closed form, Fekete and equilibrium capacity of one set.
    Capacity(CapacityArgs),
    /// γ^{(n)}(z) for D^{r,t}.
    Gamma(GammaArgs),
    /// Exhaustive/complete classification of D^{r,t}.
    Classify(ClassifyArgs),
    /// Classification over a grid of (r, t).
    PhaseDiagram(PhaseDiagramArgs),
    /// Dilatation, Beltrami data and parameter transport of φ_α.
    Qc(QcArgs),
    /// Bergman kernel and metric on a disc, punctured disc or annulus.
    Kernel(KernelArgs),
    /// Complete-to-not-complete pairs under φ_α.
    Counterexample(CounterexampleArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Arc,
    Circle,
    Segment,
    Disc,
    Point,
    /// Arc k of D^{r,t}.
    FamilyArc,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub half_width: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center_angle: f64,
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    #[arg(long)]
    pub r: Option<Scalar>,
    #[arg(long)]
    pub t: Option<Scalar>,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Fekete points (0 skips the Fekete path).
    #[arg(long, default_value_t = 64)]
    pub fekete: usize,
    /// Equilibrium nodes (0 skips the equilibrium path).
    #[arg(long, default_value_t = 64)]
    pub equilibrium: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMethodArg {
    /// Shell series at the origin, quadrature elsewhere.
    Auto,
    Shell,
    Numeric,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityPathArg {
    Closed,
    Fekete,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaArgs {
    #[arg(long)]
    pub r: Scalar,
    #[arg(long)]
    pub t: Scalar,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Evaluation point `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    pub z: Complex64,
    #[arg(long, value_enum, default_value_t = GammaMethodArg::Auto)]
    pub method: GammaMethodArg,
    #[arg(long, default_value_t = 1e-12)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value_t = CapacityPathArg::Closed)]
    pub capacity_path: CapacityPathArg,
    #[arg(long, default_value_t = 32)]
    pub fekete_n: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyArgs {
    pub r: Scalar,
    pub t: Scalar,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagramArgs {
    #[arg(long, default_value = "1/20")]
    pub r_min: Scalar,
    #[arg(long, default_value = "9/20")]
    pub r_max: Scalar,
    #[arg(long, default_value_t = 50)]
    pub r_steps: usize,
    #[arg(long, default_value = "1/100")]
    pub t_min: Scalar,
    #[arg(long, default_value = "49/100")]
    pub t_max: Scalar,
    #[arg(long, default_value_t = 50)]
    pub t_steps: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcArgs {
    #[arg(long)]
    pub alpha: Scalar,
    #[arg(long, default_value = "1/8")]
    pub r: Scalar,
    #[arg(long, default_value = "1/32")]
    pub t: Scalar,
    /// Points where the Beltrami data are reported.
    #[arg(long, value_parser = parse_complex, default_values = ["0.3,0.4", "-0.5", "0.01,-0.02"])]
    pub z: Vec<Complex64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelDomain {
    Disc,
    Punctured,
    Annulus,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value_t = KernelDomain::Disc)]
    pub domain: KernelDomain,
    /// Inner radius of the annulus.
    #[arg(long, default_value_t = 0.5)]
    pub inner: f64,
    #[arg(long, default_value_t = 30)]
    pub max_degree: u32,
    /// Lowest Laurent degree (annulus only); monomials when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub min_degree: Option<i32>,
    #[arg(long, value_parser = parse_complex, default_values = ["0"], allow_hyphen_values = true)]
    pub z: Vec<Complex64>,
    #[arg(long, default_value_t = 64)]
    pub radial_order: usize,
    #[arg(long)]
    pub angular_points: Option<usize>,
    /// Polyline `re,im;re,im;...` whose Bergman length is computed.
    #[arg(long, allow_hyphen_values = true)]
    pub path: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub alpha: Scalar,
    #[arg(long, default_value_t = 8)]
    pub max_pairs: usize,
}

/// `"0.3"` or `"0.3,-0.4"`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next().unwrap_or("").parse().map_err(|_| bad("bad real part"))?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad("bad imaginary part"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad("expected `re` or `re,im`"));
    }
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad("not finite"));
    }
    Ok(Complex64::new(re, im))
}

pub fn parse_path(s: &str) -> Result<Vec<Complex64>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

/// Runs the command and renders it in the requested format.
pub fn execute(cli: &Cli) -> Result<String> {
    let config = RunConfig {
        common: cli.common.clone(),
        command: cli.command.clone(),
    };
    config.validate()?;
    commands::render(&config)
}

/// Exit status for an error: 2 for rejected input, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter { .. } | Error::Parse { .. } => 2,
        _ => 1,
    }
}
