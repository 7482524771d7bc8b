//! Command-line front end: CSV ingestion, JSON reports, SVG drawings and
//! surface meshes, and the simulation runner.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod mesh;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use elastic_boxplot::boxplot::{DEFAULT_K_AMPLITUDE, DEFAULT_K_PHASE, DEFAULT_LAMBDA};
use elastic_boxplot::{OutlierRule, DEFAULT_GRID_SIZE};

pub use commands::run;
pub use dataset::{Dataset, Resample};
pub use error::{exit, CliError};
pub use report::Report;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "ELASTIC_BOXPLOT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "elastic-boxplot",
    version,
    about = "Elastic functional boxplots for translation, amplitude and phase",
    after_help = "Exit codes: 0 success, 1 I/O or internal error, 2 invalid input, \
                  3 median did not converge (output still written), 4 simulation failure budget exceeded.\n\
                  ELASTIC_BOXPLOT_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Separate a dataset into translation, amplitude and phase.
    Decompose(DecomposeArgs),
    /// Build the three boxplots, with optional SVG and mesh output.
    Boxplot(BoxplotArgs),
    /// Severity labels and the phase-versus-amplitude distance scatter.
    Outliers(OutliersArgs),
    /// Run one of the four simulation studies.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV dataset (time column first) or a report written by `decompose`.
    pub input: PathBuf,
    /// Number of points on the working grid (CSV input only).
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid: usize,
    /// Resampling onto the working grid (CSV input only).
    #[arg(long, value_enum, default_value_t = Resample::Linear)]
    pub resample: Resample,
}

#[derive(Debug, Clone, Args)]
pub struct BoxplotParams {
    #[arg(long, default_value_t = DEFAULT_K_AMPLITUDE)]
    pub ka: f64,
    #[arg(long, default_value_t = DEFAULT_K_PHASE)]
    pub kp: f64,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::Max)]
    pub rule: RuleArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RuleArg {
    Max,
    Min,
}

impl From<RuleArg> for OutlierRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Max => OutlierRule::Max,
            RuleArg::Min => OutlierRule::Min,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Report path; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoxplotArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: BoxplotParams,
    /// Directory for amplitude.svg and phase.svg.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Directory for amplitude_mesh.json and phase_mesh.json.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Report path; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutliersArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: BoxplotParams,
    /// Also list the flagged samples at every scanned k.
    #[arg(long)]
    pub scan: bool,
    /// k_a values scanned for severity labels.
    #[arg(long, value_delimiter = ',', default_values_t = elastic_boxplot::boxplot::DEFAULT_AMPLITUDE_SCAN)]
    pub ka_grid: Vec<f64>,
    /// k_p values scanned for severity labels.
    #[arg(long, value_delimiter = ',', default_values_t = elastic_boxplot::boxplot::DEFAULT_PHASE_SCAN)]
    pub kp_grid: Vec<f64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Simulation design, 1 to 4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub sim: u8,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    /// Functions per replicate.
    #[arg(long, default_value_t = 100)]
    pub functions: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid: usize,
    /// Amplitude k values; defaults depend on the design.
    #[arg(long, value_delimiter = ',')]
    pub ka_grid: Option<Vec<f64>>,
    /// Phase k values; defaults depend on the design.
    #[arg(long, value_delimiter = ',')]
    pub kp_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::Max)]
    pub rule: RuleArg,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}
