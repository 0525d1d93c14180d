//! Download dataset files into a local cache directory.
//!
//! Fetching is idempotent: files already present (and matching their digest,
//! when one is configured) are skipped. A lock file in the cache directory
//! serializes concurrent fetches of the same dataset.

use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use super::{sha256_hex, DatasetDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchStatus {
    Downloaded,
    Cached,
}

struct CacheLock {
    file: File,
}

impl CacheLock {
    fn acquire(data_dir: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(data_dir.join(".fetch.lock"))?;
        file.lock()?;
        Ok(CacheLock { file })
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = self.file.unlock();
    }
}

fn download(url: &str) -> Result<Vec<u8>> {
    let mut response = ureq::get(url)
        .call()
        .map_err(|e| Error::Fetch(format!("GET {url}: {e}")))?;
    response
        .body_mut()
        .read_to_vec()
        .map_err(|e| Error::Fetch(format!("reading body of {url}: {e}")))
}

fn digest_matches(path: &Path, expected: Option<&str>) -> Result<bool> {
    match expected {
        None => Ok(true),
        Some(expected) => {
            let actual = sha256_hex(&fs::read(path)?);
            Ok(actual.eq_ignore_ascii_case(expected))
        }
    }
}

/// Fetch every file of the descriptor that carries a URL. Returns the cache
/// path and status of each file, in descriptor order.
pub fn fetch(
    descriptor: &DatasetDescriptor,
    data_dir: &Path,
) -> Result<Vec<(PathBuf, FetchStatus)>> {
    let with_urls: Vec<_> = descriptor
        .files
        .iter()
        .filter(|f| f.url.is_some())
        .collect();
    if with_urls.is_empty() {
        return Err(Error::invalid(format!(
            "dataset {:?} has no source URLs configured",
            descriptor.name
        )));
    }

    fs::create_dir_all(data_dir)?;
    let _lock = CacheLock::acquire(data_dir)?;

    let mut outcome = Vec::with_capacity(with_urls.len());
    for file in with_urls {
        let url = file.url.as_deref().expect("filtered on url presence");
        let target = data_dir.join(&file.path);

        if target.exists() && digest_matches(&target, file.sha256.as_deref())? {
            outcome.push((target, FetchStatus::Cached));
            continue;
        }

        let bytes = download(url)?;
        if let Some(expected) = &file.sha256 {
            let actual = sha256_hex(&bytes);
            if !actual.eq_ignore_ascii_case(expected) {
                return Err(Error::corrupt(format!(
                    "{url}: sha256 mismatch, expected {expected}, found {actual}"
                )));
            }
        }

        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent)?;
        }
        let partial = target.with_extension("part");
        fs::write(&partial, &bytes)?;
        fs::rename(&partial, &target)?;
        outcome.push((target, FetchStatus::Downloaded));
    }
    Ok(outcome)
}
