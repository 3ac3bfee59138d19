//! Command-line front end for the twisted-cubic line-orbit machinery.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 refused by the size guardrail.

mod battery;
mod commands;
mod error;
mod parse;
mod report;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = commands::Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
