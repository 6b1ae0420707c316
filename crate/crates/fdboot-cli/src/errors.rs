//! CLI error classification: validation failures exit with code 1, I/O
//! failures with code 2.

use std::fmt;
use std::process::ExitCode;

use fdboot::FdError;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(1),
            CliError::Io(_) => ExitCode::from(2),
        }
    }

    pub fn io(context: &str, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<FdError> for CliError {
    fn from(err: FdError) -> Self {
        CliError::Validation(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
