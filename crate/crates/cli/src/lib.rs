//! `fairtab` command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

pub mod commands;
pub mod manifest;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use fairtab::checkpoint::CheckpointError;
use fairtab::data::DataError;
use fairtab::eval::EvalError;
use fairtab::training::{TrainError, Variant};

pub const DEFAULT_SEED: u64 = 42;
pub const THREADS_ENV: &str = "FAIRTAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fairtab", version, about = "Fairness-aware synthetic tabular data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean a CSV and fit the transformer.
    Prepare {
        csv: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a generator on a prepared directory.
    Train {
        prepared: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        variant: Option<Variant>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a synthetic table from a checkpoint.
    Generate {
        checkpoint: PathBuf,
        /// Rows to generate; defaults to the training-set size.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validated classifier benchmark on real and synthetic tables.
    Benchmark {
        real: PathBuf,
        /// Synthetic tables as `PATH` or `NAME=PATH`.
        synthetic: Vec<String>,
        #[arg(long)]
        schema: PathBuf,
        /// Evaluation settings JSON.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the fold and model seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the biased toy dataset and its schema.
    Toy {
        #[arg(long, default_value_t = fairtab::toy::TOY_ROWS)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn json(e: serde_json::Error) -> Self {
        CliError::Input(format!("json: {e}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Train(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }

    /// Epoch and batch of a training failure.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            CliError::Train(TrainError::NonFinite { epoch, batch, .. }) => Some((*epoch, *batch)),
            _ => None,
        }
    }
}

/// Thread cap from `FAIRTAB_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs one command; `args` are recorded in the manifest.
pub fn run(cli: Cli, args: &[String]) -> Result<(), CliError> {
    match cli.command {
        Command::Prepare { csv, schema, out } => commands::prepare(&csv, &schema, &out, args).map(drop),
        Command::Train {
            prepared,
            config,
            variant,
            seed,
            out,
        } => commands::train(&prepared, config.as_deref(), variant, seed, &out, args).map(drop),
        Command::Generate {
            checkpoint,
            n,
            seed,
            out,
        } => commands::generate(&checkpoint, n, seed, &out, args).map(drop),
        Command::Benchmark {
            real,
            synthetic,
            schema,
            config,
            seed,
            out,
        } => commands::benchmark(&real, &synthetic, &schema, config.as_deref(), seed, &out, args).map(drop),
        Command::Toy { n, seed, out } => commands::toy(n, seed, &out, args).map(drop),
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args(args: &[&str]) -> Result<(), CliError> {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let cli = Cli::try_parse_from(std::iter::once("fairtab").chain(args.iter().copied()))
        .map_err(|e| CliError::Input(e.to_string()))?;
    run(cli, &owned)
}
