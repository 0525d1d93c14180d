//! Built-in dataset shapes plus the user-editable registry config that maps
//! dataset names to files, URLs and digests.
//!
//! Config format, line-based:
//!
//! ```text
//! # comment
//! [dataset-name]
//! instances = 359
//! references = 8
//! alignment = one-to-one        # one-to-one | one-to-many | mixed
//! orig = dataset-name/orig.txt  # path relative to the data directory
//! ref0 = dataset-name/ref0.txt
//! url_orig = https://example.org/orig.txt
//! sha256_ref0 = <hex digest>
//! ```
//!
//! A section whose name matches a built-in dataset overlays it; other
//! sections declare custom datasets and must carry `instances` and
//! `references`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::{AlignmentType, DatasetDescriptor, DatasetFile, FileRole};
use crate::error::{Error, Result};

fn shape(name: &str, instances: usize, references: usize, alignment: AlignmentType) -> DatasetDescriptor {
    DatasetDescriptor {
        name: name.to_string(),
        instance_count: instances,
        reference_count: references,
        alignment,
        files: Vec::new(),
    }
}

/// The known public test sets: 100 PWKP test sentences (93 one-to-one plus 7
/// one-to-many, a single reference), the 359-sentence TurkCorpus test split
/// with 8 references, and HSplit's 4 splitting-focused references over the
/// same 359 sentences.
pub fn builtin_descriptors() -> Vec<DatasetDescriptor> {
    vec![
        shape("pwkp", 100, 1, AlignmentType::Mixed),
        shape("turkcorpus-test", 359, 8, AlignmentType::OneToOne),
        shape("hsplit", 359, 4, AlignmentType::OneToMany),
    ]
}

/// Named dataset descriptors: built-ins, optionally overlaid by a config.
#[derive(Debug, Clone)]
pub struct Registry {
    datasets: BTreeMap<String, DatasetDescriptor>,
}

impl Registry {
    pub fn builtin() -> Self {
        Registry {
            datasets: builtin_descriptors()
                .into_iter()
                .map(|d| (d.name.clone(), d))
                .collect(),
        }
    }

    pub fn from_config(path: &Path) -> Result<Self> {
        let mut registry = Self::builtin();
        registry.apply_config(path)?;
        Ok(registry)
    }

    pub fn get(&self, name: &str) -> Option<&DatasetDescriptor> {
        self.datasets.get(name)
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &DatasetDescriptor> {
        self.datasets.values()
    }

    /// Overlay a config file onto the registry.
    pub fn apply_config(&mut self, path: &Path) -> Result<()> {
        if !path.exists() {
            return Err(Error::NotFound(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;

        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }

            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim().to_string();
                if name.is_empty() {
                    return Err(Error::invalid(format!(
                        "{}:{lineno}: empty dataset name",
                        path.display()
                    )));
                }
                self.datasets
                    .entry(name.clone())
                    .or_insert_with(|| DatasetDescriptor {
                        name: name.clone(),
                        instance_count: 0,
                        reference_count: 0,
                        alignment: AlignmentType::OneToOne,
                        files: Vec::new(),
                    });
                current = Some(name);
                continue;
            }

            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "{}:{lineno}: expected `key = value`, found {line:?}",
                    path.display()
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let name = current.as_ref().ok_or_else(|| {
                Error::invalid(format!(
                    "{}:{lineno}: key {key:?} appears before any [dataset] section",
                    path.display()
                ))
            })?;
            let descriptor = self.datasets.get_mut(name).expect("section was inserted");
            apply_key(descriptor, key, value).map_err(|e| {
                Error::invalid(format!("{}:{lineno}: {e}", path.display()))
            })?;
        }

        for descriptor in self.datasets.values() {
            if descriptor.instance_count == 0 {
                return Err(Error::invalid(format!(
                    "dataset {:?} needs an `instances` entry",
                    descriptor.name
                )));
            }
            if descriptor.reference_count == 0 {
                return Err(Error::invalid(format!(
                    "dataset {:?} needs a `references` entry",
                    descriptor.name
                )));
            }
        }
        Ok(())
    }
}

fn file_entry(descriptor: &mut DatasetDescriptor, role: FileRole) -> &mut DatasetFile {
    if let Some(pos) = descriptor.files.iter().position(|f| f.role == role) {
        return &mut descriptor.files[pos];
    }
    descriptor.files.push(DatasetFile {
        role,
        path: PathBuf::new(),
        url: None,
        sha256: None,
    });
    descriptor.files.last_mut().expect("just pushed")
}

fn parse_role(key: &str) -> Option<FileRole> {
    if key == "orig" {
        return Some(FileRole::Original);
    }
    key.strip_prefix("ref")
        .and_then(|idx| idx.parse::<usize>().ok())
        .map(FileRole::Reference)
}

fn apply_key(
    descriptor: &mut DatasetDescriptor,
    key: &str,
    value: &str,
) -> std::result::Result<(), String> {
    if key == "instances" {
        descriptor.instance_count = value
            .parse()
            .map_err(|_| format!("invalid instance count {value:?}"))?;
        return Ok(());
    }
    if key == "references" {
        descriptor.reference_count = value
            .parse()
            .map_err(|_| format!("invalid reference count {value:?}"))?;
        return Ok(());
    }
    if key == "alignment" {
        descriptor.alignment = match value {
            "one-to-one" => AlignmentType::OneToOne,
            "one-to-many" => AlignmentType::OneToMany,
            "mixed" => AlignmentType::Mixed,
            other => return Err(format!("unknown alignment type {other:?}")),
        };
        return Ok(());
    }
    if let Some(role) = parse_role(key) {
        file_entry(descriptor, role).path = PathBuf::from(value);
        return Ok(());
    }
    if let Some(role) = key.strip_prefix("url_").and_then(parse_role) {
        file_entry(descriptor, role).url = Some(value.to_string());
        return Ok(());
    }
    if let Some(role) = key.strip_prefix("sha256_").and_then(parse_role) {
        file_entry(descriptor, role).sha256 = Some(value.to_string());
        return Ok(());
    }
    Err(format!("unknown key {key:?}"))
}
