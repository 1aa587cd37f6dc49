use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use transducer_sim::harness::{parse_config, run, Experiment, REFERENCE_DEFAULTS};
use transducer_sim::Error;

/// Microwave-to-optical transducer simulator.
#[derive(Parser)]
#[command(name = "transducer-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Static deflection and frequency across thickness or bias.
    Mechanics(RunArgs),
    /// Electromechanical and optomechanical couplings across bias or deflection.
    Couplings(RunArgs),
    /// Populations along one transfer trajectory.
    Transfer(RunArgs),
    /// Fidelity across temperature or optical decay rate.
    Scan(RunArgs),
    /// Print the bundled reference config.
    Defaults,
}

#[derive(Args)]
struct RunArgs {
    /// Config document (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; defaults to the config's `output`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_config() {
        2
    } else {
        3
    }
}

fn execute(experiment: Experiment, args: &RunArgs) -> Result<(), (u8, String)> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| (2, format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = parse_config(&text).map_err(|e| (exit_code(&e), e.to_string()))?;
    let table = run(experiment, &cfg).map_err(|e| (exit_code(&e), e.to_string()))?;
    match args.out.as_ref().or(cfg.output.as_ref()) {
        Some(path) => table
            .write_csv(path)
            .map_err(|e| (1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{}", table.to_csv());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match &cli.command {
        Command::Mechanics(a) => (Experiment::Mechanics, a),
        Command::Couplings(a) => (Experiment::Couplings, a),
        Command::Transfer(a) => (Experiment::Transfer, a),
        Command::Scan(a) => (Experiment::Scan, a),
        Command::Defaults => {
            print!("{REFERENCE_DEFAULTS}");
            return ExitCode::SUCCESS;
        }
    };
    match execute(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
