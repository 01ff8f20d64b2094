//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "restart-lp", version, about = "Restarted primal-dual LP solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and write its trace and summary.
    Solve(SolveArgs),
    /// Pick the primal weight (or the ADMM step size) from the 4^-5..4^5 grid.
    TuneOmega(TuneArgs),
    /// Run Fixed(4^k) for k = 1..9, adaptive and no restarts, and rank them.
    SweepRestarts(SweepArgs),
    /// Export the bilinear scaling table and the toy trajectory.
    BilinearLab(LabArgs),
}

/// Problem and solver settings shared by the solver subcommands.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// MPS file to solve.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    pub input: Option<PathBuf>,
    /// Generated instance: `toy`, `diag:s1,s2,...` or
    /// `random:m=..,n=..,density=..,seed=..`.
    #[arg(long)]
    pub generate: Option<String>,
    /// pdhg, egm, admm or ppm.
    #[arg(long, default_value = "pdhg")]
    pub method: String,
    /// `auto` (0.9/σmax for PDHG and EGM, 1 for ADMM and PPM), `tune`
    /// (ADMM and PPM only) or a positive number.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub eta: String,
    /// Primal weight: a positive number or `tune` (PDHG and EGM only).
    #[arg(long, default_value = "1")]
    pub omega: String,
    /// Iterations per grid value when tuning.
    #[arg(long, default_value_t = 5000)]
    pub tune_iterations: usize,
    /// Stop once min(KKT of average, KKT of last iterate) reaches this.
    #[arg(long)]
    pub kkt_tolerance: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub iteration_limit: usize,
    /// Iterations between termination and restart checks.
    #[arg(long, default_value_t = 30)]
    pub check_cadence: usize,
    /// Trace one row every this many checks.
    #[arg(long, default_value_t = 1)]
    pub trace_every: usize,
    /// Seed of the power method that estimates σmax.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Constant initial primal value (z⁰ = 0 by default).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub start_x: f64,
    /// Constant initial dual value.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub start_y: f64,
    /// Write zero to the elapsed-time column so traces are reproducible.
    #[arg(long)]
    pub no_wall_time: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// none, fixed:N, adaptive or flexible.
    #[arg(long, default_value = "adaptive")]
    pub scheme: String,
    /// Trace CSV path.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Summary JSON path; printed to stdout when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Tuning report JSON path; printed to stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Directory for per-run traces and summaries and the ranking table.
    #[arg(long)]
    pub output_dir: PathBuf,
    /// Normalized-gap target of the first ranking key.
    #[arg(long, default_value_t = 1e-7)]
    pub gap_target: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LabArgs {
    /// Condition numbers for the last-iterate and restarted sweeps.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    pub kappas: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    /// Targets for the average-iterate sweep.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
    pub average_epsilons: Vec<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub average_kappa: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_iterations: usize,
    /// Toy trajectory start `(x, y)`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1.0, 1.0])]
    pub toy_start: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    pub toy_iterations: usize,
    #[arg(long, default_value_t = 25)]
    pub toy_period: usize,
    #[arg(long, default_value_t = 0.2)]
    pub toy_eta: f64,
    #[arg(long)]
    pub output_dir: PathBuf,
}
