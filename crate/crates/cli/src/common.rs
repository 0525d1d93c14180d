//! Shared plumbing for the subcommands: corpus resolution, data-directory
//! defaults and frequency-table loading.

use std::io::Write;
use std::path::{Path, PathBuf};

use sseval_core::datasets::{load_corpus_files, load_dataset, read_lines, EvalCorpus, Registry};
use sseval_core::metrics::TextConfig;
use sseval_core::qe::FrequencyTable;

use crate::{CliError, CorpusArgs};

pub const DATA_DIR_ENV: &str = "SSEVAL_DATA_DIR";

/// Write to stdout, treating a closed pipe (e.g. `| head`) as a clean stop
/// rather than an error.
pub fn print_stdout(text: &str) -> Result<(), CliError> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(err) => Err(err.into()),
    }
}

pub fn resolve_data_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    PathBuf::from("sseval-data")
}

/// Registry from the explicit config, from `<data-dir>/registry.conf` when
/// present, or the built-in shapes alone.
pub fn resolve_registry(flag: Option<&Path>, data_dir: &Path) -> Result<Registry, CliError> {
    if let Some(path) = flag {
        return Ok(Registry::from_config(path)?);
    }
    let default = data_dir.join("registry.conf");
    if default.exists() {
        return Ok(Registry::from_config(&default)?);
    }
    Ok(Registry::builtin())
}

impl CorpusArgs {
    pub fn text_config(&self) -> TextConfig {
        TextConfig {
            scheme: self.tokenizer.into(),
            lowercase: !self.no_lowercase,
        }
    }

    /// Load originals and references from the test set or explicit paths,
    /// then attach the system outputs.
    pub fn load_corpus(&self) -> Result<EvalCorpus, CliError> {
        let corpus = match (&self.test_set, &self.orig) {
            (Some(name), None) => {
                let data_dir = resolve_data_dir(self.data_dir.as_deref());
                let registry = resolve_registry(self.registry.as_deref(), &data_dir)?;
                let descriptor = registry.get(name).ok_or_else(|| {
                    CliError::usage(format!(
                        "unknown test set {name:?}; run `sseval datasets list`"
                    ))
                })?;
                load_dataset(descriptor, &data_dir)?
            }
            (None, Some(orig)) => load_corpus_files(orig, &self.refs)?,
            (None, None) => {
                return Err(CliError::usage(
                    "either --test-set or --orig with --ref files is required",
                ))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::usage(
                    "--test-set and --orig are mutually exclusive",
                ))
            }
        };

        let outputs = read_lines(&self.sys, true)?;
        if outputs.len() != corpus.len() {
            return Err(CliError::usage(format!(
                "{}: expected {} lines to match the originals, found {}",
                self.sys.display(),
                corpus.len(),
                outputs.len()
            )));
        }
        Ok(corpus.with_outputs(outputs)?)
    }

    /// Load the frequency table when configured. A missing or unreadable
    /// table degrades to a warning; the lexical-complexity feature is then
    /// omitted.
    pub fn load_freq_table(&self) -> Option<FrequencyTable> {
        let path = self.freq_table.as_deref()?;
        match FrequencyTable::load(path) {
            Ok(table) => {
                for warning in table.warnings() {
                    eprintln!("warning: {}: {warning}", path.display());
                }
                Some(table)
            }
            Err(err) => {
                eprintln!("warning: frequency table unavailable, lexical complexity omitted: {err}");
                None
            }
        }
    }
}
