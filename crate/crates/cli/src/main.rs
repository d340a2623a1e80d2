//! Command-line front end.
//!
//! Exit codes: 0 success (all verification checks pass), 1 verification
//! failure, 2 usage or configuration error.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{run_curvature, run_flow, run_profile, run_verify, CommandOutput};
use config::{CommonArgs, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Usage/configuration problems; exit code 2.
    Config(String),
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    fn from_core(err: sliceflow_core::Error) -> Self {
        Self::Config(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "sliceflow",
    version,
    about = "Profile curves, slice mean curvature, and the reduced flow of rotationally symmetric submanifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the profile curve: s, r, phi, w, w'.
    Profile(CommonArgs),
    /// Compare the closed-form flow coefficient against the oracle on a grid.
    Curvature(CommonArgs),
    /// Integrate the reduced flow df/dt = -G(f).
    Flow(CommonArgs),
    /// Run the verification suite and emit a JSON report.
    Verify(CommonArgs),
}

fn emit(output: CommandOutput) -> Result<(), CliError> {
    match &output.dest {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| CliError::config(format!("cannot create {}: {e}", path.display())))?;
            file.write_all(output.body.as_bytes())
                .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
            if let Some(note) = &output.note {
                println!("{note}");
            }
        }
        None => {
            print!("{}", output.body);
        }
    }
    Ok(())
}

type Runner = fn(&RunConfig) -> Result<CommandOutput, CliError>;

fn run() -> Result<bool, CliError> {
    let cli = Cli::parse();
    let (args, runner): (&CommonArgs, Runner) = match &cli.command {
        Command::Profile(a) => (a, run_profile),
        Command::Curvature(a) => (a, run_curvature),
        Command::Flow(a) => (a, run_flow),
        Command::Verify(a) => (a, run_verify),
    };
    let cfg = RunConfig::resolve(args)?;
    let output = runner(&cfg)?;
    let failed = output.exit_failure;
    emit(output)?;
    Ok(failed)
}

fn main() -> ExitCode {
    match run() {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
