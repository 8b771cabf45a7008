//! Batch driver: dissociation scans, compact-vs-full comparisons, Pauli term
//! counts, Hamiltonian dumps and Morse fits over a directory of FCIDUMP files.

pub mod app;
pub mod fixtures;
pub mod morse;
pub mod report;
pub mod run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Fixture { path: String, message: String },
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 usage, 2 fixture or parse failure, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Fixture { .. } | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<combifock::Error> for CliError {
    fn from(e: combifock::Error) -> Self {
        match e {
            combifock::Error::Parse { .. } | combifock::Error::Io(_) => CliError::Fixture {
                path: String::from("<input>"),
                message: e.to_string(),
            },
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
