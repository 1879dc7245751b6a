//! Command-line surface, serialization and verification suites for
//! `lmk-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod suites;

use std::fmt;

/// Failure of a command, carrying its exit code class.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or out-of-range input: exit 2.
    Usage(String),
    /// Numerical, generation, verification or IO failure: exit 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lmk_core::Error> for CliError {
    fn from(e: lmk_core::Error) -> Self {
        use lmk_core::Error as E;
        match e {
            E::Domain(_) | E::Range(_) | E::Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("io error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("csv error: {e}"))
    }
}
