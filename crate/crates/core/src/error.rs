//! Error type shared by all modules of the crate.

use std::io;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated a documented precondition (bad order, mismatched
    /// corpus shapes, duplicate metric name, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A dataset file is missing on disk.
    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    /// A dataset file exists but fails validation (line counts, digests,
    /// empty lines where none are allowed).
    #[error("corrupt dataset: {0}")]
    CorruptDataset(String),

    /// A download failed; retriable.
    #[error("fetch failed: {0}")]
    Fetch(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::CorruptDataset(msg.into())
    }
}
