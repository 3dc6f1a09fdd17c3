use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use heavytail::{Family, FitConfig};

#[derive(Debug, Parser)]
#[command(
    name = "heavytail",
    version,
    about = "Fit and test heavy-tailed size distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics of one CSV column.
    Describe(DescribeArgs),
    /// Maximum-likelihood estimates with standard errors.
    Fit(FitArgs),
    /// Bootstrap Kolmogorov-Smirnov goodness of fit.
    Gof(GofArgs),
    /// Vuong comparison of two fitted families.
    Compare(CompareArgs),
    /// Quantile-quantile plot data.
    Qq(QqArgs),
    /// Draw a synthetic sample to CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with one observation per row.
    #[arg(long)]
    pub input: PathBuf,
    /// Column name; defaults to the first numeric column.
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Args)]
pub struct JsonArgs {
    /// Also write the structured report to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitFlags {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub hessian_step: f64,
}

impl FitFlags {
    pub fn config(&self) -> FitConfig {
        FitConfig {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            restarts: self.restarts,
            hessian_step: self.hessian_step,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub json: JsonArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// davies, sm, dagum, fisk or all.
    #[arg(long, default_value = "all", value_parser = parse_selection)]
    pub family: Selection,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub json: JsonArgs,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "all", value_parser = parse_selection)]
    pub family: Selection,
    /// Number of bootstrap replicates.
    #[arg(long, default_value_t = heavytail::gof::DEFAULT_REPLICATES)]
    pub bootstrap: usize,
    /// Rejection threshold for the p-value.
    #[arg(long, default_value_t = heavytail::gof::DEFAULT_GOF_THRESHOLD)]
    pub alpha: f64,
    /// Keep every replicate statistic in the JSON report.
    #[arg(long)]
    pub keep_replicates: bool,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub json: JsonArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "davies", value_parser = parse_family)]
    pub family1: Family,
    #[arg(long, default_value = "dagum", value_parser = parse_family)]
    pub family2: Family,
    #[arg(long, default_value_t = heavytail::selection::DEFAULT_THRESHOLD)]
    pub alpha: f64,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub json: JsonArgs,
}

#[derive(Debug, Args)]
pub struct QqArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "davies", value_parser = parse_family)]
    pub family: Family,
    /// Evaluate at these parameters instead of fitting, e.g. "a=2,b=1,p=0.5".
    #[arg(long)]
    pub params: Option<String>,
    /// Number of plotting positions; defaults to one per observation.
    #[arg(long)]
    pub points: Option<usize>,
    /// Probability at which the lower and upper panels meet.
    #[arg(long, default_value_t = 0.9)]
    pub split: f64,
    /// Plot-data CSV to write.
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub json: JsonArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Named ("K=1.9,b=0.63,a=0.5") or positional ("1.9,0.63,0.5").
    #[arg(long)]
    pub params: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the quantiles at (i - 0.5)/n instead of random draws.
    #[arg(long)]
    pub exact_quantiles: bool,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub json: JsonArgs,
}

/// Families requested with `--family`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection(pub Vec<Family>);

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
        .map_err(|e: heavytail::DistributionError| e.to_string())
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    if s.eq_ignore_ascii_case("all") {
        Ok(Selection(Family::ALL.to_vec()))
    } else {
        parse_family(s).map(|f| Selection(vec![f]))
    }
}
