use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tomofeat::Error;
use tomofeat_cli::config::Config;
use tomofeat_cli::pipeline::{self, RunContext};

/// Feature-map reconstruction from parallel-beam CT data.
#[derive(Parser)]
#[command(name = "tomofeat", version, about)]
struct Cli {
    /// Config file describing the run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for all artifact files.
    #[arg(long, default_value = ".", global = true)]
    out_dir: PathBuf,

    /// Overrides the noise seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize the configured phantom.
    Phantom,
    /// Project the phantom (or an input image) into a sinogram file.
    Simulate,
    /// Feature map by filtered backprojection.
    FbpFeature,
    /// Feature map by the variational solver.
    Reconstruct,
    /// Binary edge map from a feature map.
    Edges,
    /// simulate -> reconstruct -> edges with all intermediates.
    Pipeline,
    /// Rewrap an external CSV sinogram matrix into the native format.
    Convert,
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Parse("--config is required".into()))?;
    let cfg = Config::load(config_path)?;
    let ctx = RunContext {
        out_dir: cli.out_dir.clone(),
        seed_override: cli.seed,
    };
    match cli.command {
        Command::Phantom => pipeline::run_phantom(&cfg, &ctx)?,
        Command::Simulate => {
            pipeline::run_simulate(&cfg, &ctx)?;
        }
        Command::FbpFeature => {
            pipeline::run_fbp_feature(&cfg, &ctx, None)?;
        }
        Command::Reconstruct => {
            pipeline::run_reconstruct(&cfg, &ctx, None)?;
        }
        Command::Edges => {
            pipeline::run_edges(&cfg, &ctx, None)?;
        }
        Command::Pipeline => pipeline::run_pipeline(&cfg, &ctx)?,
        Command::Convert => {
            pipeline::run_convert(&cfg, &ctx)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
