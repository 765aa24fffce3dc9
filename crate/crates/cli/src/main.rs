use std::process::ExitCode;

use clap::Parser;

mod commands;
mod io;

use commands::Cli;

/// Exit status for a failed verification.
const EXIT_MISMATCH: u8 = 2;
/// Exit status for an exceeded resource budget.
const EXIT_BUDGET: u8 = 3;
/// Exit status for bad input.
const EXIT_INPUT: u8 = 4;

/// A check that ran and did not match.
#[derive(Debug)]
pub struct Mismatch(pub String);

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Mismatch {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Mismatch>().is_some() {
        return EXIT_MISMATCH;
    }
    match err.downcast_ref::<selfdual::Error>() {
        Some(selfdual::Error::Budget(_)) => EXIT_BUDGET,
        Some(selfdual::Error::Internal(_)) => EXIT_MISMATCH,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(exit_code(&Mismatch("row".into()).into()), EXIT_MISMATCH);
        assert_eq!(exit_code(&selfdual::Error::Budget("big".into()).into()), EXIT_BUDGET);
        assert_eq!(exit_code(&selfdual::Error::Parse("bad".into()).into()), EXIT_INPUT);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), EXIT_INPUT);
    }
}
