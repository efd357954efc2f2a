//! Batch command-line front end: prepare, train, evaluate, compare.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 data error,
//! 3 numerical failure.

use bondbench_cli::commands::{cmd_compare, cmd_evaluate, cmd_prepare, cmd_train};
use bondbench_cli::config::RunConfig;
use bondbench_cli::CliError;
use bondbench_core::model::ModelKind;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "bondbench", version, about = "Bond-energy regression benchmark engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the flat-namespaced JSON config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Top-level seed (overrides the config's `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for concurrent training (0 = automatic).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest, validate, filter, and sample the dataset.
    Prepare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Train one model and serialize it.
    Train {
        #[command(flatten)]
        common: CommonArgs,
        /// Model kind: svr, rf, mlp, vqr, qsvr, qnn, qrf, qcnn.
        #[arg(long)]
        model: String,
    },
    /// Evaluate a previously trained model on the test split.
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// Model kind whose serialized file to evaluate.
        #[arg(long)]
        model: String,
    },
    /// Train and evaluate every selected model; emit the consolidated table.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => return Err(CliError::Usage("--config <path> is required".into())),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = &common.out {
        config.out_dir = out.display().to_string();
    }
    if let Some(jobs) = common.jobs {
        config.jobs = jobs;
    }
    Ok(config)
}

fn parse_kind(s: &str) -> Result<ModelKind, CliError> {
    ModelKind::parse(s).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown model kind {s:?}; expected one of {}",
            ModelKind::ALL
                .iter()
                .map(|k| k.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })
}

fn run_in_pool<F: FnOnce() -> Result<(), CliError> + Send>(
    jobs: usize,
    f: F,
) -> Result<(), CliError> {
    if jobs == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
    pool.install(f)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            print!("{e}");
            std::process::exit(0);
        }
        eprintln!("{e}");
        std::process::exit(1);
    });

    match cli.command {
        Command::Prepare { common } => {
            let config = load_config(&common)?;
            cmd_prepare(&config, Path::new(&config.out_dir))
        }
        Command::Train { common, model } => {
            let config = load_config(&common)?;
            let kind = parse_kind(&model)?;
            let jobs = config.jobs;
            run_in_pool(jobs, || cmd_train(&config, kind, Path::new(&config.out_dir)))
        }
        Command::Evaluate { common, model } => {
            let config = load_config(&common)?;
            let kind = parse_kind(&model)?;
            cmd_evaluate(&config, kind, Path::new(&config.out_dir))
        }
        Command::Compare { common } => {
            let config = load_config(&common)?;
            let jobs = config.jobs;
            run_in_pool(jobs, || cmd_compare(&config, Path::new(&config.out_dir)))
        }
    }
}

fn main() {
    env_logger::init();
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
