use std::path::{Path, PathBuf};

use steiner_core::seedsel::SeedError;
use steiner_core::{GraphError, SteinerError};
use thiserror::Error;

/// Process exit statuses. Stable across releases.
pub mod exit {
    pub const INTERNAL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INPUT: u8 = 3;
    pub const DISCONNECTED: u8 = 4;
    pub const ORACLE_REFUSED: u8 = 5;
    pub const VALIDATION: u8 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Seeds(#[from] SeedError),
    #[error(transparent)]
    Solve(#[from] SteinerError),
    #[error("tree validation failed: {0}")]
    Validation(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } | CliError::Graph { .. } | CliError::Input(_) => exit::INPUT,
            CliError::Seeds(e) => match e {
                SeedError::Io(_) | SeedError::Parse { .. } => exit::INPUT,
                _ => exit::USAGE,
            },
            CliError::Solve(e) => match e {
                SteinerError::SeedsDisconnected { .. } => exit::DISCONNECTED,
                SteinerError::OracleRefused(_) => exit::ORACLE_REFUSED,
                SteinerError::EmptySeeds | SteinerError::SeedOutOfRange { .. } | SteinerError::DuplicateSeed(_) => {
                    exit::INPUT
                }
                SteinerError::Graph(_) => exit::INPUT,
                SteinerError::CorruptedState { .. } | SteinerError::Internal(_) | SteinerError::Engine(_) => {
                    exit::INTERNAL
                }
            },
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}
