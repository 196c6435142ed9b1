use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exband_cli::commands::{cmd_calibrate, cmd_cdf, cmd_curves, cmd_roc, cmd_validate, Options};
use exband_cli::{load_config, CliError};

const DEFAULT_VALIDATION_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "exband", version, about = "Monte Carlo experiments for excess-band spectrum sensing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed, overriding the experiment file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per phase, overriding the experiment file.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Also write SVG figures.
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical ROC curves.
    Roc { config: String },
    /// Empirical false-alarm CDFs of the detector statistics.
    Cdf { config: String },
    /// Closed-form false-alarm and detection probabilities against threshold.
    Curves { config: String },
    /// Thresholds for one false-alarm target.
    Calibrate {
        config: String,
        #[arg(long)]
        pfa: f64,
    },
    /// Run the oracle suite.
    Validate {
        /// Run only these checks (repeatable).
        #[arg(long = "check")]
        checks: Vec<u8>,
    },
}

fn report(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = Options { seed: cli.seed, trials: cli.trials, out: cli.out, svg: cli.svg };
    match cli.command {
        Command::Roc { config } => report(&cmd_roc(&load_config(&config)?, &opts)?),
        Command::Cdf { config } => report(&cmd_cdf(&load_config(&config)?, &opts)?),
        Command::Curves { config } => report(&cmd_curves(&load_config(&config)?, &opts)?),
        Command::Calibrate { config, pfa } => {
            let (files, table) = cmd_calibrate(&load_config(&config)?, pfa, &opts)?;
            print!("{table}");
            report(&files);
        }
        Command::Validate { checks } => {
            let outcomes = cmd_validate(opts.seed.unwrap_or(DEFAULT_VALIDATION_SEED), &checks)?;
            for c in &outcomes {
                println!("{}", c.line());
            }
            let failed = outcomes.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Validation(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("exband: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
