use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use royroot::power::DEFAULT_NULL_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "royroot",
    version,
    about = "Distribution and power of Roy's largest root under rank-one alternatives"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Significant digits (1-17) or `full`.
    #[arg(long, global = true, default_value = "6", value_parser = parse_precision)]
    pub precision: Precision,

    /// Write to this file instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Digits(u8),
    Full,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    if s == "full" {
        return Ok(Precision::Full);
    }
    match s.parse::<u8>() {
        Ok(d) if (1..=17).contains(&d) => Ok(Precision::Digits(d)),
        _ => Err(format!("expected 1-17 or 'full', got '{s}'")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detection power P(ℓ₁ > t(α)) under the approximating law.
    Power(PowerArgs),
    /// Power table from a JSON grid file.
    Table(TableArgs),
    /// Density of ℓ₁ on a grid.
    Density(GridArgs),
    /// CDF of ℓ₁ on a grid.
    Cdf(GridArgs),
    /// Quantiles of ℓ₁ on a probability grid.
    Quantile(GridArgs),
    /// Simulate ℓ₁ from the exact model and summarize.
    Simulate(SimulateArgs),
    /// Run the built-in self-test suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ScenarioArgs {
    /// Problem setting, 1-5.
    #[arg(long)]
    pub case: Option<u8>,
    /// Dimension (cases 1-4).
    #[arg(long)]
    pub m: Option<u32>,
    /// Hypothesis degrees of freedom.
    #[arg(long)]
    pub nh: Option<u32>,
    /// Error degrees of freedom (cases 3-4).
    #[arg(long)]
    pub ne: Option<u32>,
    /// Noncentrality ω (cases 2 and 4).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Signal strength λ_H (cases 1 and 3).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Noise standard deviation (cases 1-2).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Smaller variable group size (case 5).
    #[arg(long)]
    pub p: Option<u32>,
    /// Larger variable group size (case 5).
    #[arg(long)]
    pub q: Option<u32>,
    /// Degrees of freedom of the sample covariance, n + 1 observations (case 5).
    #[arg(long)]
    pub n: Option<u32>,
    /// Population canonical correlation (case 5).
    #[arg(long)]
    pub rho: Option<f64>,
    /// One-way MANOVA design (JSON: group_sizes, group_means, covariance).
    #[arg(long, value_name = "FILE", conflicts_with = "case")]
    pub from_groups: Option<PathBuf>,
    /// Regression design (JSON: design, contrast, coefficients, covariance).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["case", "from_groups"])]
    pub from_regression: Option<PathBuf>,
    /// With a builder file: treat Σ as known (case 2) instead of estimated.
    #[arg(long)]
    pub known_covariance: bool,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Test level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Use this threshold instead of a simulated null quantile (`inf` allowed).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Null replicates for the threshold.
    #[arg(long, default_value_t = 1_000_000)]
    pub replicates: u64,
    /// Master seed of the null simulation.
    #[arg(long, default_value_t = DEFAULT_NULL_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Grid file: JSON array of rows.
    pub grid: PathBuf,
    /// Null replicates per distinct null law.
    #[arg(long, default_value_t = 1_000_000)]
    pub null_replicates: u64,
    /// Replicates for rows with `simulate: true` and no own `replicates`.
    #[arg(long, default_value_t = 200_000)]
    pub replicates: u64,
    /// Master seed; simulated row `i` uses `seed + 1 + i`.
    #[arg(long, default_value_t = DEFAULT_NULL_SEED)]
    pub seed: u64,
    /// Skip all simulated-power columns.
    #[arg(long)]
    pub no_simulate: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// `auto` or `lo:hi` (probabilities for `quantile`, standardized units
    /// with `--standardized`).
    #[arg(long, default_value = "auto")]
    pub range: String,
    /// Center and scale by the moment formulas.
    #[arg(long)]
    pub standardized: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 150_000)]
    pub replicates: u64,
    /// Master seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated probabilities.
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.5,0.95,0.99")]
    pub quantiles: Vec<f64>,
    /// Comma-separated thresholds for exceedance probabilities.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Vec<f64>,
    /// Write every replicate to this file.
    #[arg(long, value_name = "PATH")]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Fchi,
    Reductions,
    Perturbation,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}
