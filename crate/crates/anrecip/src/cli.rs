//! Command-line definitions and dispatch.

use std::path::PathBuf;

use anrecip_core::correlation::{CorrelationMode, MeanKind, DEFAULT_SIGMA_REL, DEFAULT_XPD_DB};
use anrecip_core::footprint::FootprintShape;
use anrecip_core::Region;
use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands;

#[derive(Debug, Parser)]
#[command(name = "anrecip", version, about = "UL/DL antenna-pattern divergence analysis")]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, env = "ANRECIP_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster footprint density and its fit diagnostics.
    Footprint(FootprintArgs),
    /// Power-pattern divergence metrics of one UL/DL pair.
    Metrics(MetricsArgs),
    /// Polarization ellipse states and the eccentricity bound fit.
    Polstate(PolstateArgs),
    /// Footprint-weighted correlation map.
    Correlate(CorrelateArgs),
    /// Selection or maximum ratio combining of two elements.
    Diversity(DiversityArgs),
    /// Population aggregates and CDFs over a manifest.
    Stats(StatsArgs),
    /// Synthetic pattern files.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Laplacian,
    UniformDisc,
}

impl From<ShapeArg> for FootprintShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Laplacian => FootprintShape::Laplacian,
            ShapeArg::UniformDisc => FootprintShape::UniformDisc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Complex,
    Scalar,
}

impl From<ModeArg> for CorrelationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Complex => CorrelationMode::Complex,
            ModeArg::Scalar => CorrelationMode::Scalar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeanArg {
    Area,
    Arithmetic,
}

impl From<MeanArg> for MeanKind {
    fn from(m: MeanArg) -> Self {
        match m {
            MeanArg::Area => MeanKind::AreaWeighted,
            MeanArg::Arithmetic => MeanKind::Arithmetic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Combiner {
    Sc,
    Mrc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Dipole,
    Harmonic,
    TwoElement,
}

/// `sphere`, `girdle`, `outside-girdle` or `custom:θ0:θ1:φ0:φ1` (degrees).
pub fn parse_region(s: &str) -> Result<Region, String> {
    match s {
        "sphere" => Ok(Region::FullMeasured),
        "girdle" => Ok(Region::Girdle),
        "outside-girdle" => Ok(Region::OutsideGirdle),
        _ => {
            let Some(rest) = s.strip_prefix("custom:") else {
                return Err(format!("unknown region '{s}'"));
            };
            let v: Vec<f64> = rest
                .split(':')
                .map(|x| x.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("bad custom region '{s}': {e}"))?;
            let [t0, t1, p0, p1] = v[..] else {
                return Err(format!("custom region needs four angles, got '{s}'"));
            };
            Ok(Region::Custom {
                theta: (t0, t1),
                phi: (p0, p1),
            })
        }
    }
}

pub fn region_name(r: &Region) -> String {
    match r {
        Region::Custom { theta, phi } => {
            format!("custom:{}:{}:{}:{}", theta.0, theta.1, phi.0, phi.1)
        }
        other => other.label().replace('_', "-"),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 'θ,φ', got '{s}'"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    Ok((p(a)?, p(b)?))
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub ul: PathBuf,
    #[arg(long)]
    pub dl: PathBuf,
    /// Resample both links onto a grid with this spacing (degrees) first.
    #[arg(long)]
    pub resample: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FootprintArgs {
    #[arg(long, default_value_t = DEFAULT_SIGMA_REL)]
    pub sigma_rel: f64,
    /// Centre as `θ,φ` in degrees.
    #[arg(long, default_value = "90,0", value_parser = parse_pair)]
    pub center: (f64, f64),
    /// Grid spacing in degrees.
    #[arg(long, default_value_t = 3.0)]
    pub step: f64,
    #[arg(long, default_value_t = 180.0)]
    pub theta_max: f64,
    #[arg(long, value_enum, default_value_t = ShapeArg::Laplacian)]
    pub shape: ShapeArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long = "region", value_parser = parse_region, default_values = ["sphere", "girdle"])]
    pub regions: Vec<Region>,
    #[arg(long)]
    pub phone: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct PolstateArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_parser = parse_region, default_value = "sphere")]
    pub region: Region,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CorrelationArgs {
    #[arg(long, default_value_t = DEFAULT_SIGMA_REL)]
    pub sigma_rel: f64,
    #[arg(long, default_value_t = DEFAULT_XPD_DB, allow_hyphen_values = true)]
    pub xpd_db: f64,
    #[arg(long, value_enum, default_value_t = ShapeArg::Laplacian)]
    pub shape: ShapeArg,
    #[arg(long, value_enum, default_value_t = MeanArg::Area)]
    pub mean: MeanArg,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub corr: CorrelationArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Complex)]
    pub mode: ModeArg,
    #[arg(long = "region", value_parser = parse_region, default_values = ["sphere", "girdle"])]
    pub regions: Vec<Region>,
    /// Also evaluate the other mode and fit |ρ_complex| against ρ_scalar².
    #[arg(long)]
    pub quadruple: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    #[arg(long)]
    pub el1: PathBuf,
    #[arg(long)]
    pub el2: PathBuf,
    #[arg(long, value_enum)]
    pub combiner: Combiner,
    /// Correlate the combined pattern against this pattern.
    #[arg(long)]
    pub ul: Option<PathBuf>,
    #[command(flatten)]
    pub corr: CorrelationArgs,
    #[arg(long = "region", value_parser = parse_region, default_values = ["sphere", "girdle"])]
    pub regions: Vec<Region>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long = "region", value_parser = parse_region, default_values = ["sphere", "girdle"])]
    pub regions: Vec<Region>,
    #[arg(long)]
    pub resample: Option<f64>,
    /// Include correlation-map aggregates (slower).
    #[arg(long)]
    pub correlation: bool,
    #[command(flatten)]
    pub corr: CorrelationArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    /// Relative duplex detune (0.01 = 1%).
    #[arg(long, default_value_t = 0.01)]
    pub detune: f64,
    /// Dipole axis tilt from ẑ towards x̂, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tilt: f64,
    #[arg(long, default_value_t = 15.0)]
    pub step: f64,
    #[arg(long, default_value_t = 180.0)]
    pub theta_max: f64,
    #[arg(long, default_value = "synth")]
    pub band: String,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run(cli: Cli) -> Result<()> {
    let pool = crate::parallel::pool(cli.workers)?;
    pool.install(|| match cli.command {
        Command::Footprint(a) => commands::footprint::run(&a),
        Command::Metrics(a) => commands::metrics::run(&a),
        Command::Polstate(a) => commands::polstate::run(&a),
        Command::Correlate(a) => commands::correlate::run(&a),
        Command::Diversity(a) => commands::diversity::run(&a),
        Command::Stats(a) => commands::stats::run(&a),
        Command::Synth(a) => commands::synth::run(&a),
    })
}
