//! `mdmatch`: persistence diagrams, matching distances and the scheme
//! invariance check from the command line.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on bad input.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdmatch_core::{Rational, Scheme};

#[derive(Parser, Debug)]
#[command(
    name = "mdmatch",
    version,
    about = "Multidimensional matching distance between filtered complexes"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rational,
    Float,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Homology degree.
    #[arg(long, short = 'k', global = true, default_value_t = 0)]
    pub k: usize,
    /// Prime characteristic of the coefficient field.
    #[arg(long, global = true, default_value_t = 2)]
    pub field: u64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Float)]
    pub mode: Mode,
    /// Leaf normalization: adm, ladm or pnorm:<p>.
    #[arg(long, global = true, default_value = "adm")]
    pub scheme: Scheme,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Leaf selection for inputs with more than one component.
#[derive(Args, Debug, Clone, Default)]
pub struct LeafArgs {
    /// Admissible pair as `λ1,…,λn;β1,…,βn`, normalized per --scheme.
    #[arg(long, conflicts_with = "point")]
    pub pair: Option<String>,
    /// Point `u1,…,un;v1,…,vn` of Δ⁺; the leaf through it is used.
    #[arg(long)]
    pub point: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Grid resolution as `<directions>x<offsets>`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Offset bound of the grid; defaults to the largest |value| of both inputs.
    #[arg(long)]
    pub bound: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Persistence diagram of one input on one leaf, as CSV (and SVG).
    Diagram {
        input: String,
        #[command(flatten)]
        leaf: LeafArgs,
        /// Also write an SVG plot here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bottleneck distance between two diagram CSVs or two inputs on one leaf.
    Match {
        left: String,
        right: String,
        #[command(flatten)]
        leaf: LeafArgs,
    },
    /// Grid estimate of the multidimensional matching distance.
    Mdmatch {
        left: String,
        right: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Compares leaf distances across normalization schemes.
    Invariance {
        left: String,
        right: String,
        /// Comma-separated schemes to compare.
        #[arg(long, default_value = "adm,ladm,pnorm:1,pnorm:3")]
        schemes: String,
        /// Number of random probe points.
        #[arg(long, default_value_t = 100)]
        probes: usize,
        #[command(flatten)]
        grid: GridArgs,
        /// Largest allowed discrepancy.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Cross-checks ranks from the definition, from persistence pairs and from
    /// the diagram on a grid around the critical values.
    Oracle {
        /// Input file; omit with --random.
        input: Option<String>,
        #[command(flatten)]
        leaf: LeafArgs,
        /// Diagram CSV to check instead of the computed diagram.
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// Check this many seeded random complexes instead of an input.
        #[arg(long, conflicts_with = "input")]
        random: Option<usize>,
    },
    /// Writes a seeded random clique complex with uniform lattice values.
    Random {
        #[arg(long, default_value_t = 7)]
        vertices: usize,
        #[arg(long, short = 'n', default_value_t = 2)]
        components: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_probability: f64,
        #[arg(long, default_value_t = 2)]
        max_dimension: usize,
        /// Values are j/denominator with 0 ≤ j ≤ levels.
        #[arg(long, default_value_t = 16)]
        levels: i64,
        #[arg(long, default_value_t = 4)]
        denominator: i64,
    },
}

pub enum Failure {
    Input(String),
    Violation(String),
}

impl From<mdmatch_core::Error> for Failure {
    fn from(err: mdmatch_core::Error) -> Self {
        Failure::Input(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Input(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.config.mode {
        Mode::Float => commands::run::<f64>(&cli),
        Mode::Rational => commands::run::<Rational>(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("mdmatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("mdmatch: {msg}");
            ExitCode::from(2)
        }
    }
}
