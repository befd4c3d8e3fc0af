//! `ellip-limits`: evaluation, verification suites and limit tooling.

mod error;
mod eval;
mod limit;
mod params;
mod verify;

use clap::{Parser, Subcommand};
use error::CliError;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "ellip-limits", version, about = "Elliptic interpolation and biorthogonal functions and their limits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluates one function and prints [re, im] with the inputs used.
    Eval(eval::EvalArgs),
    /// Runs identity suites; exit status 1 if any case fails.
    Verify(verify::VerifyArgs),
    /// Cell classification and small-p probes.
    #[command(subcommand)]
    Limit(limit::LimitCmd),
}

fn pretty(v: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Parse(e.to_string()))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Eval(args) => {
            emit(&(pretty(&eval::run(args)?)? + "\n"));
            Ok(0)
        }
        Cmd::Verify(args) => {
            let report = verify::run(args)?;
            if args.csv {
                emit(&verify::to_csv(&report)?);
            } else {
                emit(&(pretty(&report)? + "\n"));
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Cmd::Limit(cmd) => {
            emit(&(pretty(&limit::run(cmd)?)? + "\n"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ellip-limits: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
