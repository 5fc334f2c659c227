//! File formats, run configuration and reports around `homofiber-core`.
//!
//! The `homofiber` binary wraps these: `validate`, `simulate`, `verify` and
//! `catalog`.

use std::path::PathBuf;

pub mod config;
pub mod document;
pub mod random;
pub mod simulate;
pub mod verify;

pub use config::{OutputFormat, RunConfig};
pub use document::{load_custom, SpaceDocument};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed space document: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("unknown space '{0}'")]
    UnknownSpace(String),
    #[error(transparent)]
    Core(#[from] homofiber_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// `1` for domain and validation failures, `2` for usage and parse errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Core(_) | Error::UnknownSpace(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
