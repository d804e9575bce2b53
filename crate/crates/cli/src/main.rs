use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::error;
use sensory::config::RunConfig;
use sensory::pipeline::{Pipeline, Stage};

/// Sensory-descriptor extraction and blending analysis for fiction corpora.
#[derive(Parser, Debug)]
#[command(name = "sensory", version)]
struct Cli {
    /// TOML run configuration; relative paths inside it resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Random seed for embedding training.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads. 1 keeps training deterministic.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Load the manifest, filter to fiction and write corpus statistics.
    Ingest,
    /// Tag texts, drop stop words and extract seed context windows.
    Windows,
    /// Apply the cutoff and rank descriptors per sense.
    Descriptors,
    /// Train word embeddings on the context windows.
    Train,
    /// Build the distance matrix and PCA projections.
    Geometry,
    /// Run the pairwise, radius and overlap analyses.
    Analyze,
    /// Draw the figures.
    Report,
    /// Run every stage in order.
    RunAll,
}

fn load_config(cli: &Cli) -> sensory::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => {
            let mut c = RunConfig::default();
            let cwd =
                std::env::current_dir().map_err(|e| sensory::Error::Config(format!("no working directory: {e}")))?;
            c.resolve_paths(&cwd);
            c
        }
    };
    if let Some(seed) = cli.seed {
        cfg.rng_seed = Some(seed);
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = std::path::absolute(out).unwrap_or_else(|_| out.clone());
    }
    cfg.apply_overrides();
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> sensory::Result<()> {
    let pipeline = Pipeline::new(load_config(cli)?)?;
    let stage = match cli.command {
        Command::Ingest => Stage::Ingest,
        Command::Windows => Stage::Windows,
        Command::Descriptors => Stage::Descriptors,
        Command::Train => Stage::Train,
        Command::Geometry => Stage::Geometry,
        Command::Analyze => Stage::Analyze,
        Command::Report => Stage::Report,
        Command::RunAll => return pipeline.run_all(),
    };
    pipeline.run(stage)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
