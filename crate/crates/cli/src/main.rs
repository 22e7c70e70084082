//! `couette`: command-line front end for couette-core.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use couette_core::Error;

mod commands;
mod output;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "couette", version, about = "Small-gap Couette-Taylor stability and Ginzburg-Landau solutions")]
struct Cli {
    /// Chebyshev collocation points (>= 16).
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Repeat critical-point computations at resolution + 16 and report the change.
    #[arg(long, global = true)]
    convergence_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical Taylor number and wavenumber at one (mu, bfrak).
    #[command(allow_negative_numbers = true)]
    Critical {
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        bfrak: f64,
    },
    /// Critical points over a grid of (mu, bfrak).
    Sweep {
        /// Comma-separated values or start:stop:step ranges.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        bfrak: String,
    },
    /// Landau coefficient and expansion coefficients over a list of mu.
    Landau {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Rotation ratio where the axisymmetric mode stops being the most unstable.
    MuC,
    /// Rotation ratio where the Landau coefficient changes sign.
    MuHatC,
    /// Classify and sample a steady Ginzburg-Landau solution.
    Gl(GlArgs),
    /// Roots of the linearized fourth-order problem and its regime.
    #[command(allow_negative_numbers = true)]
    Quartic {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        sigma: f64,
    },
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct GlArgs {
    /// 2 for the second-order equation, 4 for the fourth-order one.
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    /// Regime of the fourth-order equation; inferred from --tau/--sigma when absent.
    #[arg(long)]
    pub case: Option<u8>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = -1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a3: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b4: f64,
    #[arg(long = "H", default_value_t = 0.0)]
    pub h: f64,
    #[arg(long = "K", default_value_t = 0.0)]
    pub k: f64,
    /// Use H = K = 0.
    #[arg(long)]
    pub homoclinic: bool,
    /// Normal-form phase coefficients of the third regime.
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta_star: f64,
    /// Profile covers [-span/2, span/2].
    #[arg(long, default_value_t = 100.0)]
    pub span: f64,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    /// Where to write the JSON class record; stderr when absent and no --output is given.
    #[arg(long)]
    pub class_output: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    resolution: Option<usize>,
    convergence_check: Option<bool>,
    tolerances: Option<BTreeMap<String, f64>>,
    output_format: Option<Format>,
    output_path: Option<PathBuf>,
    parallel_workers: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub resolution: usize,
    pub convergence_check: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) => AppError::Usage(m),
            e => AppError::Core(e),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Core(Error::BracketExhausted { .. }) => 2,
            AppError::Core(_) | AppError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, AppError> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| AppError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str::<ConfigFile>(&text)
                .map_err(|e| AppError::Usage(format!("bad config {}: {e}", p.display())))?
        }
        None => ConfigFile::default(),
    };
    let cfg = RunConfig {
        resolution: cli.resolution.or(file.resolution).unwrap_or(couette_core::spectral::DEFAULT_POINTS),
        convergence_check: cli.convergence_check || file.convergence_check.unwrap_or(false),
        tolerances: file.tolerances.unwrap_or_default(),
        format: cli.format.or(file.output_format).unwrap_or(Format::Csv),
        output: cli.output.clone().or(file.output_path),
        workers: cli.workers.or(file.parallel_workers),
    };
    if cfg.resolution < 16 {
        return Err(AppError::Usage(format!("resolution {} is below 16", cfg.resolution)));
    }
    if let Some((k, v)) = cfg.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
        return Err(AppError::Usage(format!("tolerance {k} = {v} must be positive")));
    }
    if cfg.workers == Some(0) {
        return Err(AppError::Usage("--workers must be at least 1".into()));
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), AppError> {
    let cfg = resolve_config(&cli)?;
    faer::set_global_parallelism(faer::Par::Seq);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| AppError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Critical { mu, bfrak } => commands::critical(&cfg, mu, bfrak),
        Command::Sweep { mu, bfrak } => commands::sweep(&cfg, &mu, &bfrak),
        Command::Landau { mu } => commands::landau(&cfg, &mu),
        Command::MuC => commands::mu_c(&cfg),
        Command::MuHatC => commands::mu_hat_c(&cfg),
        Command::Gl(args) => commands::gl(&cfg, &args),
        Command::Quartic { tau, sigma } => commands::quartic(&cfg, tau, sigma),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("couette: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
