use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ugclass::commands::{cmd_classify, cmd_evaluate, cmd_ingest, cmd_perturb};
use ugclass::config::{Config, Overrides};

#[derive(Parser)]
#[command(name = "ugclass", version, about = "Node classification on uncertain graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Label every node from the seed labels.
    Classify(Opts),
    /// Repeated sub-sampling evaluation under perturbation.
    Evaluate(Opts),
    /// Write a perturbed copy of the graph and labels.
    Perturb(Opts),
    /// Estimate edge probabilities from raw records.
    Ingest(Opts),
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    edge_removal: Option<f64>,
    #[arg(long)]
    label_ratio: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (Command::Classify(o) | Command::Evaluate(o) | Command::Perturb(o) | Command::Ingest(o)) = &cli.command;
    let run = || {
        let mut cfg = Config::load(&o.config)?;
        cfg.apply(&Overrides {
            seed: o.seed,
            phi: o.phi,
            sigma: o.sigma,
            edge_removal: o.edge_removal,
            label_ratio: o.label_ratio,
            out: o.out.clone(),
        });
        match cli.command {
            Command::Classify(_) => cmd_classify(&cfg),
            Command::Evaluate(_) => cmd_evaluate(&cfg),
            Command::Perturb(_) => cmd_perturb(&cfg),
            Command::Ingest(_) => cmd_ingest(&cfg),
        }
    };
    match run() {
        Ok(out) => {
            println!("{}", out.summary);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
