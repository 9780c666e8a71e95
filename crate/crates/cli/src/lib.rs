//! Command-line harness: seeded verification runs, counterexample searches
//! and matrix-function evaluation, with JSON or CSV reports.

pub mod args;
pub mod commands;
pub mod report;

use std::process::ExitCode;

use clap::Parser;
use hlawka_core::Error;

pub use args::Cli;
pub use report::TrialReport;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn exit_code_for(err: &Error) -> u8 {
    if err.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_USAGE
    }
}

/// Parses `args`, runs the command and maps the result to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
