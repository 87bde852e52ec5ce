use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use domsearch::cluster::ThresholdRule;
use domsearch::metrics::DiversitySpace;

/// Environment variable naming the directory under which default output
/// directories are created.
pub const OUTPUT_ROOT_ENV: &str = "DOMSEARCH_OUTPUT_ROOT";

#[derive(Debug, Parser)]
#[command(name = "domsearch", version, about = "Multi-objective search by domination measure")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run replications of the search and score each approximate front.
    Run(RunArgs),
    /// Print domination measures of uniform draws or of a finite space as CSV.
    Dmeasure(DmeasureArgs),
    /// Write the true and the approximate front of one run for plotting.
    Front(FrontArgs),
    /// Print the registered problems as JSON.
    Problems,
}

/// Search settings. Flags override the config file, which overrides the
/// built-in defaults.
#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub problem: Option<String>,
    /// Seed of the first replication; replication r uses seed + r.
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML or JSON file with search settings (field names as in the manifest).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n0: Option<usize>,
    #[arg(long)]
    pub growth_exponent: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub threshold_bound: Option<f64>,
    /// Threshold distance of the first clustering (default: box diagonal / 10).
    #[arg(long)]
    pub initial_threshold: Option<f64>,
    #[arg(long)]
    pub shrink_factor: Option<f64>,
    #[arg(long, value_enum)]
    pub threshold_rule: Option<RuleArg>,
    #[arg(long)]
    pub tmax: Option<usize>,
    /// Initial covariance scale (covariance = sigma0 * I).
    #[arg(long)]
    pub sigma0: Option<f64>,
    /// Initial mean: `zero`, `box-center`, or comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub mu0: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory (default: <output root>/<problem>-seed<seed>).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overwrite artifacts in a non-empty output directory.
    #[arg(long)]
    pub force: bool,
    /// Drop returned means dominated by another returned mean.
    #[arg(long)]
    pub post_filter: bool,
    /// Number of points on the true front used for the convergence metric.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(2..))]
    pub reference_size: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub replications: u64,
    /// File format of the per-replication fronts.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Replications run at the same time (default: available parallelism).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    #[arg(long, value_enum, default_value_t = SpaceArg::Decision)]
    pub diversity_space: SpaceArg,
}

#[derive(Debug, Args)]
pub struct DmeasureArgs {
    #[arg(long)]
    pub problem: String,
    /// Number of uniform draws (uniform estimator only).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Estimator::Uniform)]
    pub estimator: Estimator,
}

#[derive(Debug, Args)]
pub struct FrontArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    Uniform,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Trace,
    Geometric,
}

impl From<RuleArg> for ThresholdRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Trace => ThresholdRule::Trace,
            RuleArg::Geometric => ThresholdRule::Geometric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Decision,
    Objective,
}

impl From<SpaceArg> for DiversitySpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Decision => DiversitySpace::Decision,
            SpaceArg::Objective => DiversitySpace::Objective,
        }
    }
}
