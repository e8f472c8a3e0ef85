//! `eewt`: construct, run and verify nested coset coding schemes.
//!
//! Exit codes: 0 success or PASS, 1 usage error, 2 data error,
//! 3 verification FAIL.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

/// A failed invocation, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    VerificationFailed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::VerificationFailed => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Data(msg) => eprintln!("error: {msg}"),
                Failure::VerificationFailed => {}
            }
            ExitCode::from(failure.code())
        }
    }
}
