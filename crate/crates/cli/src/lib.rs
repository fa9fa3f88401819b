//! Command-line front end for the `stratmean` library.

pub mod args;
pub mod commands;
pub mod error;
pub mod ingest;
pub mod render;

use std::ffi::OsString;
use std::fs;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{exit, CliError};

/// What a run writes and the status it exits with.
pub struct RunResult {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_args<I, T>(argv: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                return RunResult {
                    stdout: err.render().to_string(),
                    stderr: String::new(),
                    status: 0,
                };
            }
            let rendered = err.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let message = first.strip_prefix("error: ").unwrap_or(first);
            return failed(CliError::usage("usage", message));
        }
    };
    match commands::run(&cli.command) {
        Ok(outcome) => {
            let mut result = match out_path(&cli.command) {
                Some(path) => match fs::write(path, &outcome.output) {
                    Ok(()) => RunResult {
                        stdout: String::new(),
                        stderr: String::new(),
                        status: 0,
                    },
                    Err(e) => return failed(e.into()),
                },
                None => RunResult {
                    stdout: outcome.output,
                    stderr: String::new(),
                    status: 0,
                },
            };
            if let Some(err) = outcome.failure {
                result.stderr = err.line() + "\n";
                result.status = err.status;
            }
            result
        }
        Err(err) => failed(err),
    }
}

fn failed(err: CliError) -> RunResult {
    debug_assert!(err.status >= exit::USAGE);
    RunResult {
        stdout: String::new(),
        stderr: err.line() + "\n",
        status: err.status,
    }
}

fn out_path(command: &Command) -> Option<&std::path::Path> {
    let input = match command {
        Command::Moments(input) => input,
        Command::Estimate { input, .. }
        | Command::Mse { input, .. }
        | Command::Optimize { input, .. }
        | Command::Table { input, .. }
        | Command::Simulate { input, .. } => input,
    };
    input.out.as_deref()
}
