use std::io;
use std::path::{Path, PathBuf};

use dbs_core::ConfigError;

use crate::config_file::ConfigFileError;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: ConfigFileError,
    },
    #[error("invalid configuration: {0}")]
    Validation(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl SimError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        SimError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn csv(path: &Path, source: csv::Error) -> Self {
        SimError::io(path, source.into())
    }

    /// Process exit code: 2 for IO failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Io { .. } => 2,
            _ => 1,
        }
    }
}
