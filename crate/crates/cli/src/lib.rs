//! Command-line layer over `monolab-core`.
//!
//! [`run`] parses arguments, dispatches to one command and maps the outcome
//! to the exit-code contract in [`error::exit`].

pub mod args;
pub mod commands;
pub mod error;
pub mod figure;
pub mod grid;
pub mod output;
pub mod source;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use error::{exit, CliError, CliResult};

/// Environment variable that caps the worker-thread count.
pub const THREADS_ENV: &str = "MONOLAB_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV}='{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size thread pool: {e}")))
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sweep(a) => commands::sweep(a),
        Command::Rstar(a) => commands::rstar(a),
        Command::Verify(a) => commands::verify(a),
        Command::Figure(a) => {
            let (csv, json) = figure::figure(a)?;
            eprintln!("wrote {} and {}", csv.display(), json.display());
            Ok(())
        }
        Command::StateExport(a) => commands::state_export(a),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match execute(&cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("monolab {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
