//! `domsearch` command-line harness.
//!
//! Exit status: 0 success, 2 invalid invocation, 3 unknown or unsupported
//! problem, 4 runtime failure.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("domsearch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
