use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ihm_core::charpoly::DEFAULT_TOL;
use ihm_core::search::{DEFAULT_BLOCK_SIZE, SEARCH_MAX_N};

/// Largest `n` for the closed-form `extremal` and `bounds` paths.
pub const CLOSED_FORM_MAX_N: usize = 64;

/// `c_n` comes from an exhaustive scan up to this `n`, and from `λ_min(Z₀)` above it.
pub const EXHAUSTIVE_MAX_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "ihm",
    version,
    about = "Exhaustive and closed-form checks for the smallest eigenvalue of YYᵀ over unit lower-triangular (0,1)-matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Worker threads for exhaustive scans [default: available parallelism]
    #[arg(long, global = true, env = "IHM_WORKERS")]
    pub workers: Option<usize>,

    /// Indices of Kₙ per work block
    #[arg(long, global = true, default_value_t = DEFAULT_BLOCK_SIZE)]
    pub block_size: u64,

    /// Checkpoint file to resume from and keep updated (verify, uniqueness)
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,

    /// Relative tolerance of the Newton root
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Scan Kₙ and compare the minimum with λ_min(Z₀); exit 1 if they disagree
    Verify(SearchArgs),
    /// Scan Kₙ and report whether Y₀ is the only minimizer; exit 1 if not
    Uniqueness(SearchArgs),
    /// Y₀, Z₀ and their inverses with the closed-form checks
    Extremal {
        #[arg(long)]
        n: usize,
    },
    /// Table of c_n against the Mattila lower bounds for n = 2..=n_max
    Bounds {
        #[arg(long)]
        n_max: usize,
    },
    /// Hong–Loewy inequality and Smith's determinant on a set of integers
    GcdCheck {
        /// Comma-separated distinct positive integers
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
    },
}

#[derive(Clone, Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,

    /// Skip matrices whose Gershgorin lower bound exceeds the running minimum
    #[arg(long)]
    pub prune: bool,

    /// Stop after this many blocks; rerun with the same checkpoint to continue
    #[arg(long)]
    pub max_blocks: Option<u64>,
}

/// A validated invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub workers: usize,
    pub block_size: u64,
    pub checkpoint: Option<PathBuf>,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let c = cli.common;
        let workers = c
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
        let config = RunConfig {
            command: cli.command,
            workers,
            block_size: c.block_size,
            checkpoint: c.checkpoint,
            tol: c.tol,
            format: c.format,
            out: c.out,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if self.workers == 0 {
            return Err("--workers must be at least 1".into());
        }
        if self.block_size == 0 {
            return Err("--block-size must be at least 1".into());
        }
        let searches = matches!(self.command, Command::Verify(_) | Command::Uniqueness(_));
        if self.checkpoint.is_some() && !searches {
            return Err("--checkpoint applies only to verify and uniqueness".into());
        }
        match &self.command {
            Command::Verify(a) | Command::Uniqueness(a) => {
                if !(1..=SEARCH_MAX_N).contains(&a.n) {
                    return Err(format!("--n must lie in 1..={SEARCH_MAX_N}, got {}", a.n));
                }
                if a.n == SEARCH_MAX_N && self.checkpoint.is_none() {
                    return Err(format!("n = {SEARCH_MAX_N} runs require --checkpoint"));
                }
            }
            Command::Extremal { n } => {
                if !(1..=CLOSED_FORM_MAX_N).contains(n) {
                    return Err(format!("--n must lie in 1..={CLOSED_FORM_MAX_N}, got {n}"));
                }
            }
            Command::Bounds { n_max } => {
                if !(2..=CLOSED_FORM_MAX_N).contains(n_max) {
                    return Err(format!(
                        "--n-max must lie in 2..={CLOSED_FORM_MAX_N}, got {n_max}"
                    ));
                }
            }
            Command::GcdCheck { set, eps } => {
                if !(*eps > 0.0 && eps.is_finite()) {
                    return Err(format!("--eps must be positive, got {eps}"));
                }
                if set.len() > CLOSED_FORM_MAX_N {
                    return Err(format!("--set holds at most {CLOSED_FORM_MAX_N} elements"));
                }
            }
        }
        Ok(())
    }
}
