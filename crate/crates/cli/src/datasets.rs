//! The `datasets` subcommand: list the registry, fetch files into the data
//! directory, validate what is on disk.

use sseval_core::datasets::{fetch, validate_dataset, DatasetDescriptor, FetchStatus, Registry};

use crate::common::{resolve_data_dir, resolve_registry};
use crate::{CliError, DatasetsAction, DatasetsArgs};

fn summary(descriptor: &DatasetDescriptor) -> String {
    let files = if descriptor.has_files() {
        "files configured"
    } else {
        "shape only"
    };
    format!(
        "{} {} instances {} refs ({}, {})",
        descriptor.name,
        descriptor.instance_count,
        descriptor.reference_count,
        descriptor.alignment,
        files
    )
}

fn lookup<'r>(registry: &'r Registry, name: &str) -> Result<&'r DatasetDescriptor, CliError> {
    registry.get(name).ok_or_else(|| {
        CliError::usage(format!(
            "unknown dataset {name:?}; run `sseval datasets list`"
        ))
    })
}

pub fn run(args: &DatasetsArgs) -> Result<(), CliError> {
    let data_dir = resolve_data_dir(args.data_dir.as_deref());
    let registry = resolve_registry(args.registry.as_deref(), &data_dir)?;

    match &args.action {
        DatasetsAction::List => {
            let mut out = String::new();
            for descriptor in registry.descriptors() {
                out.push_str(&summary(descriptor));
                out.push('\n');
            }
            crate::common::print_stdout(&out)?;
        }
        DatasetsAction::Fetch { name } => {
            let descriptor = lookup(&registry, name)?;
            for (path, status) in fetch(descriptor, &data_dir)? {
                let status = match status {
                    FetchStatus::Downloaded => "downloaded",
                    FetchStatus::Cached => "cached",
                };
                crate::common::print_stdout(&format!("{status} {}\n", path.display()))?;
            }
        }
        DatasetsAction::Validate { name } => {
            let descriptor = lookup(&registry, name)?;
            validate_dataset(descriptor, &data_dir)?;
            crate::common::print_stdout(&format!(
                "ok {} ({} instances, {} refs)\n",
                descriptor.name, descriptor.instance_count, descriptor.reference_count
            ))?;
        }
    }
    Ok(())
}
