mod args;
mod commands;
mod error;
mod manifest;
mod output;

use std::process::ExitCode;

use aqm_core::sim::pipeline::with_workers;
use clap::Parser;

use crate::args::Command;
use crate::error::{CliError, CliResult};

/// Display-resolution adaptive quantization matrices.
#[derive(Debug, Parser)]
#[command(name = "aqm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Worker count from `AQM_THREADS`; 0 or unset lets rayon decide.
fn worker_count() -> CliResult<usize> {
    match std::env::var("AQM_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("AQM_THREADS must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn run(command: Command) -> CliResult<()> {
    with_workers(worker_count()?, || commands::dispatch(command))?
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version go to stdout and are not errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aqm: {e}");
            e.exit_code()
        }
    }
}
