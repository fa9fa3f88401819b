use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::ingest::InputFormat;
use crate::render::OutputFormat;

/// Mean estimation under stratified random sampling with a known
/// auxiliary mean.
#[derive(Debug, Parser)]
#[command(name = "stratmean", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combined population moments of the design.
    Moments(InputArgs),
    /// Evaluate estimators on observed stratified sample means.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        select: SelectArgs,
        /// Observed stratified mean of the study variable.
        #[arg(long, allow_hyphen_values = true)]
        ybar: f64,
        /// Observed stratified mean of the auxiliary variable.
        #[arg(long, allow_hyphen_values = true)]
        xbar: f64,
    },
    /// First-order MSE, bias and PRE at given or optimal constants.
    Mse {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        select: SelectArgs,
    },
    /// Optimal constants and the MSE they attain.
    Optimize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        select: SelectArgs,
    },
    /// The standard nine-row efficiency comparison.
    Table {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated subset of rows to keep.
        #[arg(long)]
        estimators: Option<String>,
        /// Both bundled datasets under the column headers of the printed
        /// comparison, next to the published values.
        #[arg(long)]
        paper_layout: bool,
    },
    /// Check the first-order formulas by simulation.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        select: SelectArgs,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every possible sample instead of replicating.
        #[arg(long)]
        exhaustive: bool,
        /// Exit with status 5 if any agreement verdict fails.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Bundled dataset id (paper-1, paper-2) or path to an input file.
    #[arg(long)]
    pub data: Option<String>,
    /// Input file format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    /// Sidecar `stratum,n` CSV for microdata input.
    #[arg(long)]
    pub sample_sizes: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output_format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub full_precision: bool,
}

#[derive(Debug, Args, Default)]
pub struct SelectArgs {
    /// Comma-separated estimator names, e.g. `t1,t5,ratio`.
    #[arg(long)]
    pub estimators: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    /// Use MSE-optimal values for every constant not given explicitly.
    #[arg(long)]
    pub optimal: bool,
}
