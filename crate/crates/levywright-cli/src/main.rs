//! Command-line front end: evaluate single values (JSON envelope), tabulate
//! grids (CSV), run the samplers, invert transforms numerically, and run the
//! acceptance suite.
//!
//! Exit codes: 0 success, 2 validation (bad flags, config, or domain),
//! 3 numerical failure (precision / convergence / horizon), 4 oracle
//! mismatch in `verify`.

mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "levywright", version, about = "Lévy exponents, Wright functions, exponential-functional laws, CBI semigroups")]
pub struct Cli {
    /// Flat key = value config file; command-line flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Target {
    #[value(name = "psi_gamma")]
    PsiGamma,
    #[value(name = "psi_delta")]
    PsiDelta,
    Wright,
    Density,
    #[value(name = "laplace_N")]
    LaplaceN,
    Transition,
    Entrance,
    #[value(name = "first_passage")]
    FirstPassage,
    #[value(name = "expfun_mc")]
    ExpfunMc,
    #[value(name = "absorption_mc")]
    AbsorptionMc,
    Identity,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum DirectionArg {
    #[value(name = "minus_kappa")]
    MinusKappa,
    #[value(name = "plus_kappa")]
    PlusKappa,
}

/// Scalar parameters shared by the deterministic targets. All optional at
/// the clap level: resolution against the config file (flag wins) and the
/// per-target completeness check happen in `run`.
#[derive(Args, Clone, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Wright argument.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    /// Wright upper parameter pairs, `coef:offset[,coef:offset...]`.
    #[arg(long)]
    pub upper: Option<String>,
    /// Wright lower parameter pairs, same syntax as --upper.
    #[arg(long)]
    pub lower: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Clone, Default)]
pub struct SimArgs {
    #[arg(long)]
    pub n_paths: Option<usize>,
    #[arg(long)]
    pub eps_jump: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// RNG seed; defaults to $LEVYWRIGHT_SEED, then 42.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub direction: Option<DirectionArg>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate one value; emits the {value, abs_err, method, terms} envelope.
    Eval {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Tabulate a target over a grid; emits CSV with '#' metadata lines.
    Table {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, alias = "ymin", alias = "xmin")]
        min: Option<f64>,
        #[arg(long, alias = "ymax", alias = "xmax")]
        max: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        /// Logarithmically spaced grid.
        #[arg(long)]
        log: bool,
        /// Read back a CSV written by this tool and echo it (round-trip check).
        #[arg(long)]
        read: Option<PathBuf>,
    },
    /// Run a sampler; emits one value per CSV line with '#' metadata.
    Simulate {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Numerically invert a closed-form Laplace transform on a grid (CSV).
    Invert {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, alias = "ymin")]
        min: Option<f64>,
        #[arg(long, alias = "ymax")]
        max: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 32)]
        n_nodes: usize,
    },
    /// Run verification suites.
    Verify {
        /// Which suite; only `all` exists.
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
