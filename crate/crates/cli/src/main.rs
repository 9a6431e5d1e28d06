use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

mod commands;
mod config;
mod exit;

use config::{opt_u64_as_string, u64_as_string};

/// Positive-weight cubature formulas from i.i.d. samples.
#[derive(Debug, Parser)]
#[command(name = "tchakaloff", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a rule exact on a monomial basis by sampling until the moments are in the hull.
    Construct(ConstructArgs),
    /// Compress an empirical measure to at most d weighted samples.
    Compress(CompressArgs),
    /// Check a cubature file against a moment vector.
    Verify(VerifyArgs),
    /// Estimate hull-membership sample sizes, or run the Monte Carlo error study.
    Experiment(ExperimentArgs),
    /// Tensor a rule with itself k times, optionally reducing it back to d nodes.
    Product(ProductArgs),
    /// Apply a cubature file to integrand values.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ConstructArgs {
    /// Input dimension s.
    #[arg(long)]
    pub dim: usize,
    /// Maximum total degree m.
    #[arg(long)]
    pub degree: u32,
    /// Sampling distribution: uniform (on [0,1)^s) or gaussian.
    #[arg(long, default_value = "uniform")]
    pub measure: String,
    /// Moment file (one value per line); defaults to analytic uniform-cube moments.
    #[arg(long)]
    pub moments: Option<PathBuf>,
    /// Master seed; drawn from system entropy when absent and recorded in the manifest.
    #[arg(long)]
    #[serde(serialize_with = "opt_u64_as_string")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    #[serde(serialize_with = "u64_as_string")]
    pub stream: u64,
    /// First pool size; defaults to d.
    #[arg(long)]
    pub initial_pool: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub growth_factor: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_pool: usize,
    /// Relative feasibility tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Do not retry an unstable LP with Bland's rule.
    #[arg(long)]
    pub no_bland_retry: bool,
    #[arg(long, short, default_value = "cubature.txt")]
    pub output: PathBuf,
    /// TOML config file; command-line flags override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct CompressArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub degree: u32,
    /// CSV file, one point per line.
    #[arg(long, conflicts_with = "count")]
    pub samples: Option<PathBuf>,
    /// Number of points to draw from --measure when no CSV is given.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value = "uniform")]
    pub measure: String,
    #[arg(long)]
    #[serde(serialize_with = "opt_u64_as_string")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    #[serde(serialize_with = "u64_as_string")]
    pub stream: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, short, default_value = "compressed.txt")]
    pub output: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cubature: PathBuf,
    /// Basis dimension; defaults to the file's basis.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Basis degree; defaults to the file's basis.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Moment file; defaults to analytic moments of --measure.
    #[arg(long)]
    pub moments: Option<PathBuf>,
    #[arg(long, default_value = "uniform")]
    pub measure: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ExperimentArgs {
    /// Grid of cells as `<s range>x<m range>`, e.g. `1..3x1..5`.
    #[arg(long, conflicts_with_all = ["cell", "mc_error"])]
    pub grid: Option<String>,
    /// A single cell `s,m`.
    #[arg(long, conflicts_with = "mc_error")]
    pub cell: Option<String>,
    /// Run the Monte Carlo error study instead of the sample-size search.
    #[arg(long)]
    pub mc_error: bool,
    /// Dimension for --mc-error.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Degree for --mc-error.
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    /// Comma-separated sample sizes for --mc-error.
    #[arg(long, default_value = "250,1000")]
    pub n_list: String,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long)]
    #[serde(serialize_with = "opt_u64_as_string")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 10)]
    pub threshold: usize,
    /// Lower end of the search; defaults to d.
    #[arg(long)]
    pub search_lo: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub search_hi: usize,
    /// Per-LP time limit in seconds (0 disables).
    #[arg(long, default_value_t = 10.0)]
    pub time_limit: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Worker threads for concurrent trials; defaults to all cores.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[arg(long, default_value = "experiment_out")]
    pub output_dir: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ProductArgs {
    /// Base cubature file.
    #[arg(long)]
    pub cubature: PathBuf,
    #[arg(long)]
    pub k: u32,
    /// Reduce the product to at most d nodes against the degree-m basis on the product space.
    #[arg(long, requires = "degree")]
    pub reduce: bool,
    #[arg(long)]
    pub degree: Option<u32>,
    /// Largest product node count allowed.
    #[arg(long, default_value_t = tchakaloff::cubature::DEFAULT_PRODUCT_CAP)]
    pub cap: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, short, default_value = "product.txt")]
    pub output: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub cubature: PathBuf,
    /// File of integrand values at the nodes, one per line.
    #[arg(long, conflicts_with = "monomial", required_unless_present = "monomial")]
    pub values: Option<PathBuf>,
    /// Integrate the monomial with these comma-separated exponents.
    #[arg(long)]
    pub monomial: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::expand_config(std::env::args().collect()) {
        Ok(argv) => argv,
        Err(f) => return report(f),
    };
    let cli = Cli::parse_from(argv);
    let outcome = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Compress(a) => commands::compress(a),
        Command::Verify(a) => commands::verify(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Product(a) => commands::product(a),
        Command::Integrate(a) => commands::integrate(a),
    };
    match outcome {
        Ok(()) => ExitCode::from(exit::OK),
        Err(f) => report(f),
    }
}

fn report(f: exit::Failure) -> ExitCode {
    eprintln!("error: {}", f.message);
    ExitCode::from(f.code)
}
