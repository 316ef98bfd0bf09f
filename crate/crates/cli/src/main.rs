//! `hereditary`: evaluate hereditary kernels, spectra and fits from the
//! command line.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration or input
//! error, 3 numerical failure.

mod commands;
mod config;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, Grid, InvertMethod, ModelSpec, Quantity, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
}

impl Failure {
    /// Classify a library error; `context` names the failing input.
    pub fn from_core(e: hereditary::Error, context: String) -> Self {
        use hereditary::Error as E;
        match e {
            E::InvalidParameter(_) | E::Domain { .. } => Failure::Config(format!("{context}: {e}")),
            _ => Failure::Numerical(format!("{context}: {e}")),
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "hereditary",
    version,
    about = "Hereditary kernels, relaxation spectra and dispersion fits"
)]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct ModelArgs {
    /// Model as family[:key=value,...]; keys alpha, beta, tau, m_inf, m_0.
    #[arg(long)]
    model: String,
    /// Grid as start:stop:points[:lin|log].
    #[arg(long)]
    grid: String,
    /// Relative tolerance for series and quadrature.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Tabulate a kernel as `t,value,method`.
    Eval {
        #[command(flatten)]
        common: ModelArgs,
        #[arg(long, value_enum, default_value_t)]
        quantity: Quantity,
    },
    /// Tabulate the relaxation spectrum over ln τ as `tau,value`.
    Spectrum {
        #[command(flatten)]
        common: ModelArgs,
    },
    /// Fit Havriliak-Negami parameters to `omega,re,im` data.
    Fit {
        /// Input CSV (default: stdin).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gradient tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Compare the time kernel with a numerical inverse Laplace transform.
    Invert {
        #[command(flatten)]
        common: ModelArgs,
        #[arg(long, value_enum, default_value_t)]
        method: InvertMethod,
    },
    /// Run the invariant suite and print a JSON report.
    Validate {
        /// Restrict to these modules (repeatable or comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Flip the sign of the splitting identity; the suite must then fail.
        #[arg(long)]
        sabotage: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute a JSON run configuration.
    Run { config: PathBuf },
}

fn with_model(command: Command, a: ModelArgs) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::new(command);
    cfg.model = Some(a.model.parse::<ModelSpec>()?);
    cfg.grid = Some(a.grid.parse::<Grid>()?);
    cfg.tol = a.tol;
    cfg.output = a.out;
    Ok(cfg)
}

fn build(sub: Sub) -> Result<RunConfig, Failure> {
    Ok(match sub {
        Sub::Eval { common, quantity } => RunConfig {
            quantity,
            ..with_model(Command::Eval, common)?
        },
        Sub::Spectrum { common } => with_model(Command::Spectrum, common)?,
        Sub::Invert { common, method } => RunConfig {
            method,
            ..with_model(Command::Invert, common)?
        },
        Sub::Fit {
            input,
            out,
            tol,
            max_iterations,
        } => RunConfig {
            input,
            output: out,
            tol,
            max_iterations,
            ..RunConfig::new(Command::Fit)
        },
        Sub::Validate {
            only,
            sabotage,
            out,
        } => RunConfig {
            only,
            sabotage,
            output: out,
            ..RunConfig::new(Command::Validate)
        },
        Sub::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Failure::Config(format!("{}: {e}", config.display())))?;
            RunConfig::from_json(&text)?
        }
    })
}

fn execute(cli: Cli) -> Result<bool, Failure> {
    let cfg = build(cli.command)?;
    log::info!("running {}", cfg.command);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| commands::run(&cfg))?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth an error.
            let _ = stdout.write_all(outcome.text.as_bytes());
        }
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HEREDITARY_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
