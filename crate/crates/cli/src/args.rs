use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "graphheat", version, about = "Heat kernels and gradient estimates on finite weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as JSON.
    Generate(GenerateArgs),
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Dump the heat kernel, optionally with Monte Carlo estimates.
    Kernel(KernelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Path,
    Cycle,
    Grid,
    Complete,
    Star,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Unit,
    Degree,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum SuiteArg {
    Gradient,
    HeatGradient,
    Previous,
    Harnack,
    KernelBounds,
    Volume,
    All,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Vertex count (all families except grid).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Edge probability of the random family.
    #[arg(long, default_value_t = 0.2)]
    pub p: f64,
    /// Lower end of the random weight range.
    #[arg(long, default_value_t = 1.0)]
    pub wmin: f64,
    #[arg(long, default_value_t = 1.0)]
    pub wmax: f64,
    #[arg(long, value_enum, default_value_t = MeasureArg::Unit)]
    pub measure: MeasureArg,
    /// Range of `mu` for `--measure explicit`.
    #[arg(long, default_value_t = 0.5)]
    pub mu_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub mu_max: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Lay down a random spanning tree before the random edges.
    #[arg(long)]
    pub connected: bool,
    /// Independent weights in the two directions of each random edge.
    #[arg(long)]
    pub asymmetric: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub suite: Vec<SuiteArg>,
    /// Evaluation times.
    #[arg(long = "t", value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Truncation tolerance of the heat kernel series.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    /// Random positive functions per suite.
    #[arg(long, default_value_t = 20)]
    pub functions: usize,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long = "t", value_delimiter = ',', required = true)]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Walks per source vertex for Monte Carlo columns.
    #[arg(long)]
    pub mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
