use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use trion_core::cli::{parse_scenario, run, CliError, Command};

/// Completions, certificates and spectral scans for upper triangular operator matrices.
#[derive(Debug, Parser)]
#[command(name = "trion", version)]
struct Args {
    command: Command,
    /// Scenario document (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for written artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the scenario's rank tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.scenario)?;
    let mut scenario = parse_scenario(&text)?;
    if scenario.command != args.command {
        return Err(CliError::Validation(format!(
            "scenario is a `{}` scenario, not `{}`",
            scenario.command, args.command
        )));
    }
    if let Some(tol) = args.tol {
        scenario.params.tol = tol;
    }
    if let Some(seed) = args.seed {
        scenario.params.seed = seed;
    }
    scenario.validate()?;
    run(&scenario, &args.out, &mut std::io::stdout().lock())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trion: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
