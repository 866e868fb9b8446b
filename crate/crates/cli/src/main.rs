use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cqed::acceptance::acceptance_config;
use cqed::dataio::{load_config_with, ExperimentConfig, Strictness};
use cqed::Error;

mod analytic;
mod fit;
mod output;
mod reproduce;
mod simulate;

use output::Format;

/// Simulation, analytic estimates and parameter extraction for a two-level
/// emitter in a lossy optical cavity.
#[derive(Debug, Parser)]
#[command(name = "cqed", version)]
struct Cli {
    /// Experiment configuration (TOML); defaults to the reference parameter set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for synthetic data and the optimizer (sets fit.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Dotted-key override, e.g. `system.g_hz=42.4e6` or `drive.p_in_w="5 nW"`.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Warn about unknown config keys instead of rejecting them.
    #[arg(long, global = true)]
    lax: bool,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write its curves plus a summary.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
    },
    /// Global fit of (g, Gamma_d, Gamma_sd) to saturation, linewidth and decay data.
    Fit(fit::FitArgs),
    /// Evaluate one closed-form expression; arguments are positional or `name=value`.
    Analytic {
        formula: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run the acceptance suite and write a pass/fail report.
    Reproduce {
        /// Comma-separated criterion ids (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
    /// Print the effective configuration and its hash.
    ShowConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    Decay,
    Ple,
    Saturation,
    Detuning,
    Map2d,
}

/// Process exit status.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numeric(String),
    Acceptance(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Acceptance(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numeric(m) | Failure::Acceptance(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

/// Effective configuration: file or built-in default, then `--override`s in
/// order, then `--seed`.
fn effective_config(cli: &Cli, default: ExperimentConfig) -> CliResult<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let mode = if cli.lax { Strictness::Lax } else { Strictness::Strict };
            load_config_with(path, mode)?
        }
        None => default,
    };
    for o in &cli.overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| Failure::Validation(format!("override `{o}` is not of the form key=value")))?;
        cfg = cfg.apply_override(key.trim(), value.trim())?;
    }
    if let Some(seed) = cli.seed {
        cfg.fit.seed = seed;
    }
    Ok(cfg)
}

pub fn ensure_dir(path: &Path) -> CliResult {
    std::fs::create_dir_all(path)
        .map_err(|e| Failure::Validation(format!("cannot create {}: {e}", path.display())))
}

fn run(cli: &Cli) -> CliResult {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Validation(e.to_string()))?;
    }
    match &cli.command {
        Command::Simulate { kind } => {
            let cfg = effective_config(cli, ExperimentConfig::reference())?;
            simulate::run(*kind, &cfg, &cli.out, cli.format)
        }
        Command::Fit(args) => {
            let cfg = effective_config(cli, ExperimentConfig::reference())?;
            fit::run(args, &cfg, &cli.out, cli.format)
        }
        Command::Analytic { formula, args } => {
            let cfg = effective_config(cli, ExperimentConfig::reference())?;
            analytic::run(formula, args, &cfg, cli.format)
        }
        Command::Reproduce { only } => {
            let cfg = effective_config(cli, acceptance_config())?;
            reproduce::run(&cfg, only, &cli.out, cli.format)
        }
        Command::ShowConfig => {
            let cfg = effective_config(cli, ExperimentConfig::reference())?;
            print!("{}", cfg.to_toml()?);
            println!("# sha256 {}", cfg.hash()?);
            Ok(())
        }
    }
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
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
