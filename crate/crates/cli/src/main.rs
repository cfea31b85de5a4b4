use std::path::PathBuf;
use std::process::ExitCode;

use anomaly_cli::{commands, RunConfig};
use anomaly_core::Execution;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "anomaly",
    version,
    about = "Anomaly labeling and GA-initialized MLP classification"
)]
struct Cli {
    /// TOML run configuration; defaults apply to anything it leaves out.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic clustered dataset.
    Synth,
    /// Label a dataset with ND/CNA/CPA/PA.
    Label {
        input: Option<PathBuf>,
        /// Replace labels already present in the input.
        #[arg(long)]
        relabel: bool,
    },
    /// Train one MLP on a labeled dataset.
    Train { input: Option<PathBuf> },
    /// Train a conventional MLP and a GA-initialized MLP and compare them.
    Compare {
        input: Option<PathBuf>,
        /// Evaluate GA fitness on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Evaluate a saved model on a labeled dataset.
    Eval {
        input: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
        /// Normalization written by `train`; by default the input is scaled on its own range.
        #[arg(long, value_name = "PATH")]
        normalization: Option<PathBuf>,
    },
    /// Write per-class ROC curves for a saved model.
    Roc {
        input: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
        #[arg(long, value_name = "PATH")]
        normalization: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = cli.out {
        cfg.out = o;
    }
    match &cli.command {
        Command::Synth => commands::cmd_synth(&cfg),
        Command::Label { input, relabel } => commands::cmd_label(&cfg, input.as_deref(), *relabel),
        Command::Train { input } => commands::cmd_train(&cfg, input.as_deref()),
        Command::Compare { input, sequential } => {
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            commands::cmd_compare(&cfg, input.as_deref(), exec)
        }
        Command::Eval {
            input,
            model,
            normalization,
        } => commands::cmd_eval(&cfg, model, input.as_deref(), normalization.as_deref()),
        Command::Roc {
            input,
            model,
            normalization,
        } => commands::cmd_roc(&cfg, model, input.as_deref(), normalization.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(msg) => {
            if !quiet {
                println!("{msg}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
