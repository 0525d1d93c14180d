//! The `evaluate` subcommand: compute the selected metrics plus
//! transformation F1s and QE aggregates, and print one JSON document (or a
//! table with `--table`) to stdout.

use std::collections::BTreeMap;

use serde::Serialize;

use sseval_core::annotation::{transformation_f1, Transformation};
use sseval_core::datasets::EvalCorpus;
use sseval_core::metrics::{
    corpus_bleu, corpus_sari, fkgl, SariBreakdown, Smoothing, TextConfig, DEFAULT_MAX_ORDER,
};
use sseval_core::qe::{aggregate_features, compute_features, AggregateFeatures};

use crate::{CliError, EvaluateArgs};

const KNOWN_METRICS: [&str; 3] = ["sari", "bleu", "fkgl"];

/// The JSON document printed by `evaluate`. Key names and order are part of
/// the interface; scores are 0-100 for sari/bleu, a grade for fkgl, and
/// 0-1 for transformation F1s and QE proportions.
#[derive(Serialize)]
pub struct ScoreDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sari_breakdown: Option<SariBreakdown>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bleu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fkgl: Option<f64>,
    pub transformations: BTreeMap<&'static str, f64>,
    pub qe: QeSection,
}

#[derive(Serialize)]
pub struct QeSection {
    pub system: AggregateFeatures,
}

pub fn evaluate_corpus(
    corpus: &EvalCorpus,
    metrics: &[String],
    text: &TextConfig,
    table: Option<&sseval_core::qe::FrequencyTable>,
) -> Result<ScoreDocument, CliError> {
    if let Some(unknown) = metrics.iter().find(|m| !KNOWN_METRICS.contains(&m.as_str())) {
        return Err(CliError::usage(format!(
            "unknown metric {unknown:?}; known metrics: {}",
            KNOWN_METRICS.join(", ")
        )));
    }

    let outputs = corpus.outputs().expect("corpus loaded with outputs");
    let originals = corpus.originals();
    let references = corpus.references();

    let mut document = ScoreDocument {
        sari: None,
        sari_breakdown: None,
        bleu: None,
        fkgl: None,
        transformations: BTreeMap::new(),
        qe: QeSection {
            system: aggregate_features(
                &originals
                    .iter()
                    .zip(outputs)
                    .map(|(s, o)| compute_features(s, o, table))
                    .collect::<Result<Vec<_>, _>>()?,
            )?,
        },
    };

    for metric in metrics {
        match metric.as_str() {
            "sari" => {
                let (sari, breakdown) =
                    corpus_sari(originals, outputs, references, DEFAULT_MAX_ORDER, text)?;
                document.sari = Some(sari);
                document.sari_breakdown = Some(breakdown);
            }
            "bleu" => {
                document.bleu = Some(corpus_bleu(
                    outputs,
                    references,
                    DEFAULT_MAX_ORDER,
                    Smoothing::None,
                    text,
                )?);
            }
            "fkgl" => {
                document.fkgl = Some(fkgl(outputs)?);
            }
            _ => unreachable!("metric names validated above"),
        }
    }

    let scores = transformation_f1(originals, outputs, references, text.scheme)?;
    for t in Transformation::ALL {
        document.transformations.insert(t.name(), scores.get(t));
    }

    Ok(document)
}

fn render_table(document: &ScoreDocument) -> String {
    let mut out = String::new();
    let mut row = |name: &str, value: String| {
        out.push_str(&format!("{name:<28}{value}\n"));
    };
    if let Some(v) = document.sari {
        row("SARI", format!("{v:.2}"));
    }
    if let Some(b) = &document.sari_breakdown {
        row("  add F1", format!("{:.2}", 100.0 * b.add.overall));
        row("  keep F1", format!("{:.2}", 100.0 * b.keep.overall));
        row("  del F1", format!("{:.2}", 100.0 * b.del.overall));
    }
    if let Some(v) = document.bleu {
        row("BLEU", format!("{v:.2}"));
    }
    if let Some(v) = document.fkgl {
        row("FKGL", format!("{v:.2}"));
    }
    for (name, value) in &document.transformations {
        row(&format!("{name} F1"), format!("{:.4}", value));
    }
    let qe = &document.qe.system;
    row("compression ratio", format!("{:.4}", qe.compression_ratio));
    row("levenshtein similarity", format!("{:.4}", qe.levenshtein_similarity));
    row("sentence splits", format!("{:.4}", qe.sentence_splits));
    row("exact matches", format!("{:.4}", qe.exact_match));
    row("added proportion", format!("{:.4}", qe.added_proportion));
    row("deleted proportion", format!("{:.4}", qe.deleted_proportion));
    if let Some(v) = qe.lexical_complexity {
        row("lexical complexity", format!("{v:.4}"));
    }
    out
}

pub fn run(args: &EvaluateArgs) -> Result<(), CliError> {
    let corpus = args.corpus.load_corpus()?;
    let freq_table = args.corpus.load_freq_table();
    let document = evaluate_corpus(
        &corpus,
        &args.metrics,
        &args.corpus.text_config(),
        freq_table.as_ref(),
    )?;

    if args.table {
        crate::common::print_stdout(&render_table(&document))
    } else {
        let json = serde_json::to_string_pretty(&document)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        crate::common::print_stdout(&format!("{json}\n"))
    }
}
