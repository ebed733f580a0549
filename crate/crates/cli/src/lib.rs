//! Library side of the `qdiscrim` command-line tool.
//!
//! Each subcommand is a plain function returning its output as a string so
//! tests can drive it without spawning processes. Exit codes: 0 success,
//! 1 verification failure, 2 input error, 3 numeric failure.

mod commands;
mod sweep;

pub use commands::{cmd_bounds, cmd_copies, cmd_verify, CopiesReport, VerifyOutcome};
pub use sweep::{
    parse_csv, render, rows_to_csv, rows_to_json, run_sweep, trial_instance, OutputFormat, StateKind, SweepConfig,
    SweepRow, CSV_HEADER,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] qdiscrim_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => EXIT_INPUT,
            CliError::Core(e) if e.is_input_error() => EXIT_INPUT,
            CliError::Core(_) => EXIT_NUMERIC,
        }
    }
}
