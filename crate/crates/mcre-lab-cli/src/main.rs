//! `mcre-lab` — feedback-driven multi-agent chain laboratory.
//!
//! Subcommands: `validate`, `analyze`, `simulate`, `erm`, `bound`,
//! `verify`. Every command that produces files writes a `manifest.json`
//! with the semantic configuration and input digests; reruns with the same
//! seed are byte-identical up to the manifest timestamp.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid configuration,
//! 3 model invariant violation, 4 theorem precondition violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "mcre-lab", version, about = "Finite multi-agent behavior chains: analysis, simulation, learning, and bound verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Exactly one of a model file or a scenario file.
#[derive(Args, Debug, Clone)]
pub struct ModelSource {
    /// Model JSON file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Toy sponsored-search scenario JSON file (built into a model).
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum LossArg {
    ZeroOne,
    Hamming,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKindArg {
    Pointwise,
    Uniform,
    Corollary,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Stationary,
    Fixed,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model file and report every invariant violation.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Ergodic analysis of the lifted chain: irreducibility, period,
    /// primitivity index, stationary distribution, mixing profile,
    /// assumption checks.
    Analyze {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Erase zero-kernel-mass states before analysis.
        #[arg(long)]
        prune: bool,
        /// Largest mixing lag computed.
        #[arg(long, default_value_t = 200)]
        m_max: usize,
    },
    /// Sample a trajectory and write it as CSV.
    Simulate {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        seed: u64,
        /// stationary, or fixed:<joint behavior label> (e.g. fixed:bid0 or
        /// fixed:low,high).
        #[arg(long, default_value = "stationary")]
        start: String,
        /// Burn-in rounds for fixed starts.
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        /// Record the user factor column.
        #[arg(long)]
        record_users: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical risk minimization over a hypothesis class file.
    Erm {
        #[command(flatten)]
        source: ModelSource,
        /// Hypothesis class JSON file.
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LossArg::ZeroOne)]
        loss: LossArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a bound formula from explicit parameters.
    Bound {
        #[arg(long, value_enum)]
        kind: BoundKindArg,
        /// JSON parameter file; flags override its fields.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Loss bound B.
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        n0: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        z: Option<usize>,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        cover: Option<usize>,
        #[arg(long)]
        tau: Option<usize>,
        /// Mixing coefficient at the block length (uniform kind).
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        beta0: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        /// Optional output directory (bound.json + manifest); defaults to
        /// stdout only.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo deviation tails and dominance against theorem bounds.
    Verify {
        #[command(flatten)]
        source: ModelSource,
        /// Hypothesis class file for the uniform (supremum) experiment.
        #[arg(long)]
        class: Option<PathBuf>,
        /// Single-hypothesis class file for the pointwise experiment.
        #[arg(long)]
        hypothesis: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        replicas: usize,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        t_grid: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.3")]
        eps_grid: Vec<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LossArg::ZeroOne)]
        loss: LossArg,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { code: 2, error: anyhow::anyhow!(msg.into()) }
    }

    pub fn model(error: anyhow::Error) -> Self {
        CliError { code: 3, error }
    }

    pub fn internal(error: anyhow::Error) -> Self {
        CliError { code: 1, error }
    }
}

impl From<mcre_lab::Error> for CliError {
    fn from(e: mcre_lab::Error) -> Self {
        use mcre_lab::Error as E;
        let code = match &e {
            E::Model(_) | E::Dimension(_) | E::StateCap { .. } => 3,
            E::Precondition(_) | E::NotErgodic(_) | E::Reducible | E::NoConvergence(_) => 4,
            E::InvalidArgument(_) => 2,
        };
        CliError { code, error: e.into() }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(error: anyhow::Error) -> Self {
        CliError { code: 1, error }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn init_thread_pool() {
    if let Ok(value) = std::env::var("MCRE_LAB_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { model } => commands::validate(&model),
        Command::Analyze { source, seed, out, prune, m_max } => {
            commands::analyze(&source, seed, &out, prune, m_max)
        }
        Command::Simulate { source, rounds, seed, start, burn_in, record_users, out } => {
            commands::simulate(&source, rounds, seed, &start, burn_in, record_users, &out)
        }
        Command::Erm { source, class, rounds, seed, loss, out } => {
            commands::erm(&source, &class, rounds, seed, loss, &out)
        }
        Command::Bound { kind, params, b, n0, delta, z, rounds, eps, cover, tau, beta, beta0, gamma, s, c, out } => {
            let flags = commands::BoundFlags {
                b, n0, delta, z, rounds, eps, cover, tau, beta, beta0, gamma, s, c,
            };
            commands::bound(kind, params.as_deref(), &flags, out.as_deref())
        }
        Command::Verify { source, class, hypothesis, replicas, t_grid, eps_grid, seed, loss, out } => {
            commands::verify(
                &source,
                class.as_deref(),
                hypothesis.as_deref(),
                replicas,
                &t_grid,
                &eps_grid,
                seed,
                loss,
                &out,
            )
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
