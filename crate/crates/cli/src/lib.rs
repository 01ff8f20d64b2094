//! Command-line harness: solve, primal-weight tuning, restart-length sweeps
//! and the bilinear laboratory exports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod config;
pub mod lab;
pub mod output;
pub mod solve;
pub mod sweep;
pub mod tune;

use std::fmt;

pub use args::{Cli, Command};

/// Process exit codes.
pub mod exit {
    pub const OPTIMAL: i32 = 0;
    pub const ITERATION_LIMIT: i32 = 2;
    pub const INPUT_ERROR: i32 = 3;
    pub const DIVERGED: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unwritable file.
    Io(String),
    /// Malformed MPS input or generator spec.
    Parse(String),
    /// Invalid flag value or combination.
    Usage(String),
    /// The solver's iterates left the finite range.
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Diverged(_) => exit::DIVERGED,
            _ => exit::INPUT_ERROR,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "error[io]: {m}"),
            CliError::Parse(m) => write!(f, "error[parse]: {m}"),
            CliError::Usage(m) => write!(f, "error[usage]: {m}"),
            CliError::Diverged(m) => write!(f, "error[diverged]: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<restart_lp::Error> for CliError {
    fn from(e: restart_lp::Error) -> Self {
        use restart_lp::Error as E;
        match e {
            E::Parse { .. } | E::InfeasibleBounds { .. } => CliError::Parse(e.to_string()),
            E::Diverged { .. } => CliError::Diverged(e.to_string()),
            E::InvalidParameter(_) | E::DimensionMismatch { .. } | E::InvalidEntry { .. } => {
                CliError::Usage(e.to_string())
            }
            E::Breakdown(_) | E::NoBracket(_) => CliError::Diverged(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => solve::cmd_solve(&a),
        Command::TuneOmega(a) => tune::cmd_tune(&a).map(|_| exit::OPTIMAL),
        Command::SweepRestarts(a) => sweep::cmd_sweep(&a).map(|_| exit::OPTIMAL),
        Command::BilinearLab(a) => lab::cmd_bilinear_lab(&a).map(|_| exit::OPTIMAL),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
