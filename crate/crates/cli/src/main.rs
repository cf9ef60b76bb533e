//! `dichotomy` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid input, 3 resonant forcing frequency, 1 anything else.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::Command;

#[derive(Debug, Parser)]
#[command(name = "dichotomy", version, about = "Loss-parameter spectral analysis of A(beta) = Omega - i beta B")]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file (overrides `[output].path`; stdout when neither is set).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Command to run (overrides `command` in the config).
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Reserved; no command uses randomness.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Resonant(String),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Resonant(_) => 3,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Resonant(m) | CliError::Other(m) => m,
        }
    }
}

impl From<dichotomy::Error> for CliError {
    fn from(e: dichotomy::Error) -> Self {
        let msg = config::single_line(&e.to_string());
        match e {
            dichotomy::Error::ResonantFrequency { .. } => CliError::Resonant(msg),
            ref v if v.is_validation() => CliError::Validation(msg),
            _ => CliError::Other(msg),
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Validation(format!("cannot read {}: {e}", args.config.display()))
    })?;
    let cfg = config::parse(&text)?;
    let command = args
        .command
        .or(cfg.command)
        .ok_or_else(|| CliError::Validation("no command given (config `command` or --command)".into()))?;
    let format = cfg.output.clone().unwrap_or_default().format;
    let body = match command {
        Command::Analyze => commands::analyze(&cfg, format)?,
        Command::Sweep => commands::sweep(&cfg, format)?,
        Command::Respond => commands::respond(&cfg, format)?,
        Command::Circuit => commands::circuit(&cfg)?,
    };
    let target = args
        .output
        .clone()
        .or_else(|| cfg.output.as_ref().and_then(|o| o.path.as_ref().map(PathBuf::from)));
    match target {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let _ = args.seed;
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
