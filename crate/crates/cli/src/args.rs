use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Lindeberg fractions, exact Kolmogorov distances and bound checks.
#[derive(Debug, Parser)]
#[command(name = "lindeberg-lab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a fraction with its witness and term split.
    Fraction(FractionArgs),
    /// Convolve exactly and print the Kolmogorov distance to the normal law.
    Delta(DeltaArgs),
    /// Run the inequality corpus and the identity suite.
    Verify(VerifyArgs),
    /// Print the derived and published constants.
    Constants,
    /// Search a family for large `Delta_n / fraction` ratios.
    Search(SearchArgs),
    /// Write step functions and objectives over a z grid as CSV.
    Plot(PlotArgs),
}

/// A context: the listed summand files, repeated `n` times.
#[derive(Debug, Args)]
pub struct ContextArgs {
    /// Distribution file (JSON `{"atoms": [[value, prob], ...]}`); repeat for
    /// heterogeneous summands.
    #[arg(long = "dist", required = true)]
    pub dists: Vec<PathBuf>,
    /// Number of copies of the listed summands.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FractionKind {
    Esseen,
    Rozovskii,
    KatzPetrov,
    Osipov,
    SupZl,
}

#[derive(Debug, Args)]
pub struct FractionArgs {
    #[arg(long, value_enum)]
    pub kind: FractionKind,
    /// g-function spec, e.g. `identity`, `power:0.5`, `clip-above:B`.
    #[arg(long, default_value = "identity")]
    pub g: String,
    /// Truncation level; `inf` allowed.
    #[arg(long, default_value = "1")]
    pub eps: String,
    /// Weight of the third-moment term; `inf` and `gamma*` allowed.
    #[arg(long, default_value = "1")]
    pub gamma: String,
    #[command(flatten)]
    pub context: ContextArgs,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub context: ContextArgs,
    /// Drop atoms lighter than this after each convolution step.
    #[arg(long, default_value_t = 0.0)]
    pub prune: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Corpus,
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Corpus spec file; the built-in corpus is used when absent.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Run only one suite.
    #[arg(long, value_enum)]
    pub only: Option<Suite>,
    /// Restrict the corpus to these inequality ids (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub ids: Vec<String>,
    /// Write the full report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the full report.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value = "KP")]
    pub id: String,
    #[arg(long, default_value = "identity")]
    pub g: String,
    #[arg(long, default_value = "1")]
    pub eps: String,
    #[arg(long, default_value = "1")]
    pub gamma: String,
    #[arg(long, default_value = "two-point")]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Evaluations for the local searches.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Coarse grid points per shape dimension.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub context: ContextArgs,
    #[arg(long, default_value = "identity")]
    pub g: String,
    #[arg(long, default_value = "1")]
    pub gamma: String,
    /// Number of log-spaced grid points; breakpoints are always included.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Largest z on the grid; defaults to twice the largest breakpoint.
    #[arg(long)]
    pub zmax: Option<f64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
