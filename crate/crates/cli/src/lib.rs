//! Library side of the `macpoly` command: run configuration, verification
//! suites and the serialized report, table and rule formats.

pub mod config;
pub mod output;
pub mod suites;

use std::fmt;

use macpoly_core::Error;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl CliError {
    /// Bad input is a usage error; a computation that could not finish or a
    /// moment matrix that is not positive definite is a failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                Error::Domain(_) | Error::GammaPole(_) | Error::Precision(_) | Error::Capacity(_),
            ) => EXIT_USAGE,
            CliError::Core(_) => EXIT_FAIL,
            CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
