//! Library side of the `forerunner` command: configuration parsing, dataset
//! writers and the subcommand bodies. The binary only maps arguments onto
//! these functions.

use std::fmt;
use std::io;

use forerunner_core::Error;

pub mod commands;
pub mod config;
pub mod figures;
pub mod output;

/// Why a subcommand stopped.
#[derive(Debug)]
pub enum Failure {
    /// A validation suite found a mismatch.
    Validation(String),
    Core(Error),
    Io(io::Error),
}

impl Failure {
    /// 0 success, 1 validation failure, 2 configuration error, 3 numerical error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Core(e) if e.is_configuration() => 2,
            Failure::Core(_) => 3,
            Failure::Io(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "validation failed: {m}"),
            Failure::Core(e) => e.fmt(f),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}
