use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "uniquant",
    version,
    about = "Uniform decompositions, certified quantizers and exact transport"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a probability measure into n pieces of mass 1/n in small cubes.
    Decompose(DecomposeArgs),
    /// Build the n-point quantizer and its error certificates.
    Quantize(QuantizeArgs),
    /// Split a point cloud into n classes of equal size.
    Classify(ClassifyArgs),
    /// Exact Wasserstein distance between two measures.
    Wasserstein(WassersteinArgs),
    /// Measured error and bounds over a grid of quantizer sizes.
    RateCurve(RateCurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Measure file; `.csv` or `.json`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generator spec, e.g. `grid:d=2,m=50,r=1`, `twodirac:gap=1`,
    /// `sample:dist=pareto,q=2,N=10000`.
    #[arg(long)]
    pub gen: Option<String>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Rescale input weights to total mass one.
    #[arg(long)]
    pub normalize: bool,
    /// Seed for sampling generators and random baselines.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Moment order for truncating unbounded support (needs q > p).
    #[arg(long)]
    pub q: Option<f64>,
    /// Also report the exact W_p between the quantizer and the measure.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Point cloud as an equally weighted measure.
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Target {
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub target_gen: Option<String>,
}

#[derive(Debug, Args)]
pub struct WassersteinArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct RateCurveArgs {
    #[command(flatten)]
    pub source: Source,
    /// Sizes: `4..100`, `3..41:2` (step 2) or `8,16,32`.
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Average this many i.i.d. samples per n as a baseline.
    #[arg(long)]
    pub baseline: Option<usize>,
    /// Grid spacing for the optimal-quantizer search.
    #[arg(long)]
    pub oracle: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}
