//! The `heavytail` command-line tool.
//!
//! Each subcommand prints a table on standard output and, with `--json PATH`,
//! writes a [`report::Report`]. Diagnostics go to standard error.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

pub mod args;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub use commands::parse_params;

use args::{Cli, Command};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Arguments after the program name with any `--json` option removed.
fn command_echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        if a == "--json" {
            iter.next();
        } else if !a.starts_with("--json=") {
            out.push(a.clone());
        }
    }
    out
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    1
                }
            };
        }
    };
    let echo = command_echo(
        &args
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect::<Vec<_>>(),
    );

    let (outcome, json) = match &cli.command {
        Command::Describe(a) => (commands::cmd_describe(a, echo), &a.json.json),
        Command::Fit(a) => (commands::cmd_fit(a, echo), &a.json.json),
        Command::Gof(a) => (commands::cmd_gof(a, echo), &a.json.json),
        Command::Compare(a) => (commands::cmd_compare(a, echo), &a.json.json),
        Command::Qq(a) => (commands::cmd_qq(a, echo), &a.json.json),
        Command::Simulate(a) => (commands::cmd_simulate(a, echo), &a.json.json),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    for w in &outcome.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let _ = write!(stdout, "{}", outcome.table);
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, outcome.report.to_json()) {
            let err = CliError::Data(format!("cannot write {}: {e}", path.display()));
            let _ = writeln!(stderr, "error: {err}");
            return err.exit_code();
        }
    }
    match outcome.failure {
        Some(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
