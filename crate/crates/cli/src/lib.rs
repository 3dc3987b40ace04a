//! Plumbing behind the `lettercost` binary: probability sources, the
//! subcommand implementations and the exit-code mapping. Commands return
//! their output as a string so they can be exercised without a process.

pub mod commands;
pub mod generate;

use thiserror::Error;

pub use commands::{Format, Options};
pub use generate::ProbSource;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_ORACLE_TOO_LARGE: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] lettercost::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    /// Output is still produced; the process exits with a failure code.
    #[error("bound violated: {message}")]
    Violation { message: String, output: String },
}

impl CliError {
    pub fn reason(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.reason(),
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Violation { .. } => "bound-violation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.reason() {
            "no-root" | "divergent-spec" | "divergent-tail" | "bin-underflow" | "oracle-cap" => {
                EXIT_NUMERIC
            }
            "oracle-too-large" => EXIT_ORACLE_TOO_LARGE,
            "bound-violation" => EXIT_VIOLATION,
            _ => EXIT_PARSE,
        }
    }
}

macro_rules! lib_error_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Lib(e.into())
            }
        }
    )*};
}

lib_error_from!(
    lettercost::CostError,
    lettercost::CodeError,
    lettercost::AnalysisError,
    lettercost::OracleError
);
