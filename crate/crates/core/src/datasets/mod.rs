//! Evaluation corpora: shape-validated loaders for line-aligned test sets,
//! a registry of known dataset layouts, and a fetch-by-URL cache.
//!
//! No corpus data is bundled. The built-in registry records the expected
//! shapes (instance counts, reference counts, alignment kinds); a
//! user-editable config file supplies file paths, download URLs and digests.
//!
//! File format: UTF-8, one instance per line, LF or CRLF accepted, LF
//! emitted. Originals and references must not contain empty lines; system
//! output files may.

mod fetch;
mod registry;

pub use fetch::{fetch, FetchStatus};
pub use registry::{builtin_descriptors, Registry};

use std::fmt;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// How original sentences map to their references.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignmentType {
    OneToOne,
    OneToMany,
    Mixed,
}

impl fmt::Display for AlignmentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlignmentType::OneToOne => "one-to-one",
            AlignmentType::OneToMany => "one-to-many",
            AlignmentType::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Role of one file inside a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FileRole {
    Original,
    Reference(usize),
}

/// One file of a dataset: where it lives relative to the data directory,
/// and optionally where to fetch it from and what it must hash to.
#[derive(Debug, Clone)]
pub struct DatasetFile {
    pub role: FileRole,
    pub path: PathBuf,
    pub url: Option<String>,
    pub sha256: Option<String>,
}

/// Shape and file layout of one evaluation dataset.
#[derive(Debug, Clone)]
pub struct DatasetDescriptor {
    pub name: String,
    pub instance_count: usize,
    pub reference_count: usize,
    pub alignment: AlignmentType,
    /// Empty when only the shape is known (no config entry yet).
    pub files: Vec<DatasetFile>,
}

impl DatasetDescriptor {
    pub fn has_files(&self) -> bool {
        !self.files.is_empty()
    }

    pub fn original_file(&self) -> Option<&DatasetFile> {
        self.files.iter().find(|f| f.role == FileRole::Original)
    }

    /// Reference files ordered by reference index.
    pub fn reference_files(&self) -> Vec<&DatasetFile> {
        let mut refs: Vec<&DatasetFile> = self
            .files
            .iter()
            .filter(|f| matches!(f.role, FileRole::Reference(_)))
            .collect();
        refs.sort_by_key(|f| f.role);
        refs
    }
}

/// A parallel evaluation corpus: originals, optional system outputs, and R
/// reference sequences, all of the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalCorpus {
    originals: Vec<String>,
    outputs: Option<Vec<String>>,
    references: Vec<Vec<String>>,
}

impl EvalCorpus {
    pub fn new(
        originals: Vec<String>,
        outputs: Option<Vec<String>>,
        references: Vec<Vec<String>>,
    ) -> Result<Self> {
        let n = originals.len();
        if n == 0 {
            return Err(Error::invalid("corpus has no instances"));
        }
        if references.is_empty() {
            return Err(Error::invalid("corpus has no reference sequences"));
        }
        if let Some(outputs) = &outputs {
            if outputs.len() != n {
                return Err(Error::invalid(format!(
                    "corpus length mismatch: {n} originals vs {} outputs",
                    outputs.len()
                )));
            }
        }
        for (r, refs) in references.iter().enumerate() {
            if refs.len() != n {
                return Err(Error::invalid(format!(
                    "corpus length mismatch: {n} originals vs {} sentences in reference {r}",
                    refs.len()
                )));
            }
        }
        Ok(EvalCorpus {
            originals,
            outputs,
            references,
        })
    }

    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }

    pub fn reference_count(&self) -> usize {
        self.references.len()
    }

    pub fn originals(&self) -> &[String] {
        &self.originals
    }

    pub fn outputs(&self) -> Option<&[String]> {
        self.outputs.as_deref()
    }

    pub fn references(&self) -> &[Vec<String>] {
        &self.references
    }

    /// All references of one instance.
    pub fn instance_references(&self, index: usize) -> Vec<&str> {
        self.references.iter().map(|r| r[index].as_str()).collect()
    }

    /// Attach (or replace) the system outputs.
    pub fn with_outputs(mut self, outputs: Vec<String>) -> Result<Self> {
        if outputs.len() != self.len() {
            return Err(Error::invalid(format!(
                "corpus length mismatch: {} originals vs {} outputs",
                self.len(),
                outputs.len()
            )));
        }
        self.outputs = Some(outputs);
        Ok(self)
    }
}

/// Read one-instance-per-line UTF-8 text. CRLF is accepted; a trailing
/// newline is tolerated. Empty lines are rejected unless `allow_empty`.
pub fn read_lines(path: &Path, allow_empty: bool) -> Result<Vec<String>> {
    if !path.exists() {
        return Err(Error::NotFound(path.to_path_buf()));
    }
    let raw = std::fs::read_to_string(path)?;
    let mut lines: Vec<String> = raw
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
        .collect();
    if lines.last().is_some_and(String::is_empty) {
        lines.pop();
    }
    if !allow_empty {
        for (i, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                return Err(Error::corrupt(format!(
                    "{}: line {} is empty",
                    path.display(),
                    i + 1
                )));
            }
        }
    }
    Ok(lines)
}

/// Write one instance per line, LF separators, trailing newline.
pub fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Load a corpus from explicit files: one originals file plus one file per
/// reference. Line counts must agree.
pub fn load_corpus_files(original: &Path, references: &[PathBuf]) -> Result<EvalCorpus> {
    if references.is_empty() {
        return Err(Error::invalid("at least one reference file is required"));
    }
    let originals = read_lines(original, false)?;
    let mut reference_lines = Vec::with_capacity(references.len());
    for path in references {
        let lines = read_lines(path, false)?;
        if lines.len() != originals.len() {
            return Err(Error::corrupt(format!(
                "{}: expected {} lines, found {}",
                path.display(),
                originals.len(),
                lines.len()
            )));
        }
        reference_lines.push(lines);
    }
    EvalCorpus::new(originals, None, reference_lines)
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn check_digest(path: &Path, expected: &str) -> Result<()> {
    let actual = sha256_hex(&std::fs::read(path)?);
    if !actual.eq_ignore_ascii_case(expected) {
        return Err(Error::corrupt(format!(
            "{}: sha256 mismatch, expected {expected}, found {actual}",
            path.display()
        )));
    }
    Ok(())
}

/// Check that every file of the dataset exists, has exactly the declared
/// number of non-empty lines, and matches its digest when one is configured.
pub fn validate_dataset(descriptor: &DatasetDescriptor, data_dir: &Path) -> Result<()> {
    if !descriptor.has_files() {
        return Err(Error::invalid(format!(
            "dataset {:?} has no configured files; add them to the registry config",
            descriptor.name
        )));
    }
    let original = descriptor.original_file().ok_or_else(|| {
        Error::invalid(format!("dataset {:?} has no original file", descriptor.name))
    })?;
    let references = descriptor.reference_files();
    if references.len() != descriptor.reference_count {
        return Err(Error::invalid(format!(
            "dataset {:?} declares {} references but configures {} reference files",
            descriptor.name,
            descriptor.reference_count,
            references.len()
        )));
    }

    for file in std::iter::once(original).chain(references) {
        let path = data_dir.join(&file.path);
        let lines = read_lines(&path, false)?;
        if lines.len() != descriptor.instance_count {
            return Err(Error::corrupt(format!(
                "{}: expected {} lines, found {}",
                path.display(),
                descriptor.instance_count,
                lines.len()
            )));
        }
        if let Some(expected) = &file.sha256 {
            check_digest(&path, expected)?;
        }
    }
    Ok(())
}

/// Validate and load a registered dataset from the data directory.
pub fn load_dataset(descriptor: &DatasetDescriptor, data_dir: &Path) -> Result<EvalCorpus> {
    validate_dataset(descriptor, data_dir)?;
    let original = data_dir.join(
        &descriptor
            .original_file()
            .expect("validated dataset has an original file")
            .path,
    );
    let references: Vec<PathBuf> = descriptor
        .reference_files()
        .iter()
        .map(|f| data_dir.join(&f.path))
        .collect();
    load_corpus_files(&original, &references)
}
