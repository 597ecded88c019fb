use std::path::PathBuf;
use std::process::ExitCode;

use bergman_core::pipeline::{run_mode, Mode};
use bergman_core::selftest::run_selftest;
use bergman_core::{Error, Scenario};
use clap::{Args, Parser, Subcommand};

const EXIT_INVALID: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 1;

#[derive(Parser)]
#[command(
    name = "bergman",
    version,
    about = "Diagnostics for Toeplitz products on the Bergman space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sarason sup, truncated norms and Schur ratios.
    Boundedness(RunArgs),
    /// Boundary-limit predicate, tail constants and Hilbert-Schmidt tails.
    Compactness(RunArgs),
    /// The g = 1 case: sup of the composition norm next to sup |f|.
    Corollary(RunArgs),
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    /// Directory for the report and curve files.
    #[arg(long, short, default_value = ".")]
    out: PathBuf,
}

fn run(mode: Mode, args: &RunArgs) -> ExitCode {
    let scenario = match Scenario::read(&args.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("invalid scenario: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let output = match run_mode(mode, &scenario) {
        Ok(o) => o,
        Err(e @ Error::InvalidScenario(_)) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INVALID);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    match output.write(&args.out) {
        Ok(paths) => paths.iter().for_each(|p| println!("{}", p.display())),
        Err(e) => {
            eprintln!("cannot write to {}: {e}", args.out.display());
            return ExitCode::from(EXIT_IO);
        }
    }
    for stage in &output.report.stages {
        if let Some(err) = &stage.error {
            eprintln!("stage {} failed: {err}", stage.stage);
        }
    }
    if output.report.succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn selftest() -> ExitCode {
    let results = run_selftest();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<26} worst {:.3e} tol {:.0e}",
            r.name, r.worst, r.tolerance
        );
    }
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Boundedness(a) => run(Mode::Boundedness, a),
        Command::Compactness(a) => run(Mode::Compactness, a),
        Command::Corollary(a) => run(Mode::Corollary, a),
        Command::Selftest => selftest(),
    }
}
