use std::path::PathBuf;

use thiserror::Error;

use crate::env::EnvError;
use crate::rng::EmptyRange;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Env(#[from] EnvError),

    #[error(transparent)]
    Rng(#[from] EmptyRange),

    #[error("runs have unequal episode counts ({expected} vs {found})")]
    UnequalRuns { expected: usize, found: usize },

    #[error("{0}")]
    Empty(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("seed {seed}: {source}")]
    Run {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
