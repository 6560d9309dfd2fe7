use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use colorbound::bounds::LossKind;
use colorbound::ColoringKind;

#[derive(Debug, Parser)]
#[command(name = "colorbound", version, about = "Color-class Rademacher complexity reports for graph samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-graph color histograms and the resulting number of classes.
    Color(ColorArgs),
    /// Exact complexity and every applicable bound.
    Bound(BoundArgs),
    /// Monte Carlo estimate with a Hoeffding interval.
    Estimate(EstimateArgs),
    /// Multiplicity differences and the stability bound between two samples.
    Stability(StabilityArgs),
    /// Classes and complexity along trivial, degree, 1-WL and exact colorings.
    Hierarchy(HierarchyArgs),
    /// Generalization bound for a labeled sample.
    GenBound(GenBoundArgs),
    /// Write a synthetic JSONL sample.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColoringArg {
    Trivial,
    Degree,
    Wl,
    ExactIso,
}

impl From<ColoringArg> for ColoringKind {
    fn from(c: ColoringArg) -> Self {
        match c {
            ColoringArg::Trivial => ColoringKind::Trivial,
            ColoringArg::Degree => ColoringKind::Degree,
            ColoringArg::Wl => ColoringKind::Wl,
            ColoringArg::ExactIso => ColoringKind::ExactIso,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ColorArgs {
    /// JSONL file or TU dataset directory.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "wl")]
    pub coloring: ColoringArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "wl")]
    pub coloring: ColoringArg,
    /// Supremum of the l2 norm of outputs over the sample; adds the general upper bound.
    #[arg(long = "sup-l")]
    pub sup_l: Option<f64>,
    /// Mesh points for the entropy integral.
    #[arg(long, default_value_t = colorbound::bounds::DEFAULT_MESH_POINTS)]
    pub mesh_points: usize,
    /// Write a bound-vs-exact chart across p.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "wl")]
    pub coloring: ColoringArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    /// The two samples to compare, e.g. `--input a.jsonl --input b.jsonl`.
    #[arg(long, short, num_args = 1, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "wl")]
    pub coloring: ColoringArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HierarchyArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    LogisticCe,
    RescaledCe,
    MarginTanh,
}

impl From<LossArg> for LossKind {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::LogisticCe => LossKind::LogisticCe,
            LossArg::RescaledCe => LossKind::RescaledCe,
            LossArg::MarginTanh => LossKind::MarginTanh,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenBoundArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "wl")]
    pub coloring: ColoringArg,
    /// Empirical risk of the hypothesis on the sample.
    #[arg(long, conflicts_with = "predictions")]
    pub empirical_risk: Option<f64>,
    /// One prediction per class (in report class order), one per line; the
    /// empirical risk is the fraction of graphs whose label differs in sign.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "logistic-ce")]
    pub loss: LossArg,
    #[arg(long = "b-phi", default_value_t = 1.0)]
    pub b_phi: f64,
    #[arg(long = "b-beta", default_value_t = 1.0)]
    pub b_beta: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
    /// Derivative bound of the rescaled activation.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    ErdosRenyi,
    DRegular,
    Cycle,
    DisjointCycles,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub edge_probability: f64,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Cycle lengths for `disjoint-cycles`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Destination JSONL file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
