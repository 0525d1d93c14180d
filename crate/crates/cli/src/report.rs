//! The `report` subcommand: evaluate everything and render one
//! self-contained HTML file, written atomically (temp file then rename).

use std::path::Path;

use sseval_core::metrics::Smoothing;
use sseval_core::report::{build_bundle, render_html, ReportOptions};

use crate::{CliError, ReportArgs};

fn default_system_name(args: &ReportArgs) -> String {
    args.corpus
        .sys
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "system".to_string())
}

/// Write via a sibling temp file and rename, so a failed run never leaves a
/// partial report at the destination.
fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let mut temp = path.as_os_str().to_owned();
    temp.push(".tmp");
    let temp = Path::new(&temp);
    std::fs::write(temp, contents)?;
    if let Err(err) = std::fs::rename(temp, path) {
        let _ = std::fs::remove_file(temp);
        return Err(err.into());
    }
    Ok(())
}

pub fn run(args: &ReportArgs) -> Result<(), CliError> {
    let corpus = args.corpus.load_corpus()?;
    let freq_table = args.corpus.load_freq_table();

    let options = ReportOptions {
        system_name: args
            .system_name
            .clone()
            .unwrap_or_else(|| default_system_name(args)),
        text: args.corpus.text_config(),
        max_order: sseval_core::metrics::DEFAULT_MAX_ORDER,
        smoothing: Smoothing::None,
        seed: args.seed,
    };

    let bundle = build_bundle(&corpus, freq_table.as_ref(), None, &options)?;
    let html = render_html(&bundle);
    write_atomically(&args.output, &html)?;
    crate::common::print_stdout(&format!("{}\n", args.output.display()))
}
