//! CLI error type carrying the process exit code.
//!
//! Exit codes: 0 success, 2 input validation, 3 I/O, 4 probe infeasibility.

use std::fmt;

use metric_gauntlet_core::CoreError;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed or inconsistent input (exit 2).
    Validation(String),
    /// Unreadable or unwritable file (exit 3).
    Io(String),
    /// A probe cannot satisfy its request on this data (exit 4).
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Io(msg) | CliError::Infeasible(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::FractionUnreachable { .. } => CliError::Infeasible(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
