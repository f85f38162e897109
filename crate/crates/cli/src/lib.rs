//! Command-line front end for the `valdist` library.

pub mod error;
pub mod parse;
pub mod plot;
pub mod record;
pub mod spec;

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use valdist::Complex64;

pub use commands::{execute, Output};
pub use error::CliError;

#[derive(Parser, Debug, Clone)]
#[command(name = "valdist", version, about = "Certified value distribution of L-functions right of the line of absolute convergence")]
pub struct Cli {
    /// Target accuracy of individual evaluations.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Cap on the worker pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Primary output file: the table, the plot, or the run record when the
    /// command has no table.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the run record here.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Table sizes for catalog entries; ignored for spec files.
#[derive(Args, Debug, Clone)]
pub struct CatalogArgs {
    #[arg(long, default_value = "1e5", value_parser = parse::count)]
    pub p_max: u64,
    #[arg(long, default_value = "1e4", value_parser = parse::count)]
    pub n_max: u64,
    /// Cache file for Ramanujan tau values.
    #[arg(long)]
    pub tau_cache: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KroneckerMethod {
    Grid,
    Lattice,
    Density,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanStrategy {
    Raster,
    Constructive,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigmaChoice {
    Reachability,
    Base,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Count primes up to a limit.
    Sieve {
        #[arg(value_parser = parse::count)]
        limit: u64,
    },
    /// Mean of |a(p)|^2 over primes, for one entry or the difference of two.
    Selberg {
        #[arg(num_args = 1..=2, required = true)]
        entries: Vec<String>,
        #[arg(long, value_parser = parse::count)]
        x: u64,
        /// Comma-separated checkpoints; log-spaced by default.
        #[arg(long, value_parser = parse::count, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Ramanujan tau(n) for n up to a limit.
    Tau {
        #[arg(value_parser = parse::count)]
        n: u64,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Print only tau(n).
        #[arg(long)]
        only: bool,
    },
    /// Unimodular c_j with sum c_j r_j = z.
    Annulus {
        #[arg(long, value_parser = parse::complex, value_delimiter = ',', allow_hyphen_values = true)]
        radii: Vec<Complex64>,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Block construction of twists for (log L)^{(m)} = z.
    Cassels {
        entry: String,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 50, value_parser = parse::count)]
        n1: u64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, value_parser = parse::count)]
        n_final: Option<u64>,
        #[arg(long, default_value_t = 10)]
        max_blocks: usize,
        /// Fixed sigma; otherwise chosen by `--rule`.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_enum, default_value_t = SigmaChoice::Reachability)]
        rule: SigmaChoice,
        #[arg(long, default_value = "1e6", value_parser = parse::count)]
        horizon: u64,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Real tau with p^{-i tau} close to prescribed unimodular targets.
    Kronecker {
        #[arg(long, value_parser = parse::count, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Unimodular targets, comma-separated.
        #[arg(long, value_parser = parse::complex, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "phases")]
        targets: Option<Vec<Complex64>>,
        /// Target arguments in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phases: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.5)]
        eps1: f64,
        #[arg(long, default_value = "1e5")]
        t_max: f64,
        #[arg(long, value_enum, default_value_t = KroneckerMethod::Grid)]
        method: KroneckerMethod,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Certified solution of L(s) = z or (log L)^{(m)}(s) = z right of the abscissa.
    Construct {
        entry: String,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value_t = 1)]
        limit: usize,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// All solutions in a strip, by raster or by repeated construction.
    Scan {
        entry: String,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, value_enum, default_value_t = ScanStrategy::Raster)]
        strategy: ScanStrategy,
        #[arg(long, default_value_t = 0.05)]
        cell_sigma: f64,
        #[arg(long, default_value_t = 0.5)]
        cell_t: f64,
        #[arg(long, default_value_t = 3)]
        max_split: u32,
        #[arg(long, default_value_t = 5)]
        limit: usize,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Re-validate the certificates of a run record.
    Certify {
        record_file: PathBuf,
        /// Also re-run the recorded command and compare outputs.
        #[arg(long)]
        replay: bool,
    },
    /// Almost period theta and the nonvanishing of L(s) + L(s + i theta).
    Almostperiod {
        entry: String,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, default_value = "1e6")]
        theta_cap: f64,
        /// Spot-check points.
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Spot checks sample t in [0, t_max].
        #[arg(long, default_value_t = 1000.0)]
        t_max: f64,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// SVG scatter of a scan table.
    Plot {
        csv: PathBuf,
        #[arg(long)]
        title: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PipelineArgs {
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0")]
    pub z: Complex64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value = "2e5")]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps1: f64,
    #[arg(long, default_value_t = 20)]
    pub candidates: usize,
    #[arg(long, default_value = "2000", value_parser = parse::count)]
    pub n_final: u64,
    /// Disable the local linear comparator.
    #[arg(long)]
    pub no_taylor: bool,
}

/// Parse, run, emit; returns the process exit code.
pub fn main_with(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("valdist".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_USAGE } else { error::EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli, argv).and_then(|out| out.emit(&cli)) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
