//! Render a [`ReportBundle`](super::ReportBundle) into one self-contained
//! HTML5 document: inline styles, inline SVG plots, no external resources.

use std::fmt::Write as _;

use super::svg::histogram_svg;
use super::{HighlightKind, ReportBundle, SampledInstance, Side};
use crate::annotation::Transformation;
use crate::qe::AggregateFeatures;

const HISTOGRAM_BINS: usize = 20;

const STYLE: &str = "\
body{font-family:sans-serif;margin:2em auto;max-width:60em;color:#222;}\n\
h1{font-size:1.5em;}h2{border-bottom:1px solid #ccc;padding-bottom:.2em;margin-top:2em;}\n\
table{border-collapse:collapse;margin:1em 0;}\n\
th,td{border:1px solid #ccc;padding:.35em .7em;text-align:right;}\n\
th:first-child,td:first-child{text-align:left;}\n\
thead th{background:#f2f2f2;}\n\
.meta{color:#666;}\n\
.sample{margin:1em 0;padding:.6em .8em;border:1px solid #ddd;border-radius:4px;}\n\
.sample p{margin:.3em 0;}\n\
.sample .tag{color:#666;font-size:.85em;}\n\
.hl-delete{background:#f8c8c8;}\n\
.hl-replace{background:#fde2b8;}\n\
.hl-move{background:#c8d8f8;}\n\
.hl-addition{background:#c8ecc8;}\n\
.hl-copy{background:#eee;}\n\
.legend span{margin-right:1em;padding:.1em .4em;}\n\
svg.histogram rect{fill:#5b8dd6;}\n\
svg.histogram .axis{stroke:#444;stroke-width:1;}\n\
svg.histogram .tick{font-size:11px;fill:#444;}\n\
svg.histogram .plot-title{font-size:13px;fill:#222;}\n\
.empty{color:#888;font-style:italic;}\n";

pub(super) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn fmt_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.2}"),
        None => "–".to_string(),
    }
}

fn highlight_class(kind: HighlightKind) -> &'static str {
    match kind {
        HighlightKind::Delete => "hl-delete",
        HighlightKind::Move => "hl-move",
        HighlightKind::Replace => "hl-replace",
        HighlightKind::Copy => "hl-copy",
        HighlightKind::Addition => "hl-addition",
    }
}

/// Wrap the tokens of one side in highlight spans.
fn render_tokens(tokens: &[String], sample: &SampledInstance, side: Side) -> String {
    let mut kind_at: Vec<Option<HighlightKind>> = vec![None; tokens.len()];
    for span in sample.highlights.iter().filter(|s| s.side == side) {
        for slot in &mut kind_at[span.start..span.end] {
            *slot = Some(span.kind);
        }
    }
    let mut out = String::new();
    let mut i = 0;
    while i < tokens.len() {
        if i > 0 {
            out.push(' ');
        }
        match kind_at[i] {
            None => {
                out.push_str(&escape(&tokens[i]));
                i += 1;
            }
            Some(kind) => {
                let mut end = i + 1;
                while end < tokens.len() && kind_at[end] == Some(kind) {
                    end += 1;
                }
                let _ = write!(
                    out,
                    "<span class=\"{}\">{}</span>",
                    highlight_class(kind),
                    escape(&tokens[i..end].join(" "))
                );
                i = end;
            }
        }
    }
    out
}

fn feature_rows(out: &mut String, system: &AggregateFeatures, reference: &AggregateFeatures) {
    let rows: [(&str, f64, f64); 6] = [
        ("Compression ratio", system.compression_ratio, reference.compression_ratio),
        (
            "Levenshtein similarity",
            system.levenshtein_similarity,
            reference.levenshtein_similarity,
        ),
        ("Sentence splits", system.sentence_splits, reference.sentence_splits),
        ("Exact matches", system.exact_match, reference.exact_match),
        ("Added words proportion", system.added_proportion, reference.added_proportion),
        ("Deleted words proportion", system.deleted_proportion, reference.deleted_proportion),
    ];
    for (label, sys, reference_value) in rows {
        let _ = writeln!(
            out,
            "<tr><td>{label}</td><td>{sys:.2}</td><td>{reference_value:.2}</td></tr>"
        );
    }
    let _ = writeln!(
        out,
        "<tr><td>Lexical complexity (log-rank Q3)</td><td>{}</td><td>{}</td></tr>",
        fmt_opt(system.lexical_complexity),
        fmt_opt(reference.lexical_complexity)
    );
}

fn scores_section(out: &mut String, bundle: &ReportBundle) {
    out.push_str("<h2 id=\"scores\">Scores</h2>\n");
    out.push_str("<table>\n<thead><tr><th>Metric</th><th>Value</th></tr></thead>\n<tbody>\n");
    let metric = &bundle.metrics;
    if let Some(sari) = metric.sari {
        let _ = writeln!(out, "<tr><td>SARI</td><td>{sari:.2}</td></tr>");
    }
    if let Some(b) = &metric.sari_breakdown {
        for op in [&b.add, &b.keep, &b.del] {
            let name = match op.operation {
                crate::metrics::SariOperation::Add => "add",
                crate::metrics::SariOperation::Keep => "keep",
                crate::metrics::SariOperation::Del => "del",
            };
            let _ = writeln!(
                out,
                "<tr><td>SARI {name} F1</td><td>{:.2}</td></tr>",
                100.0 * op.overall
            );
        }
    }
    if let Some(bleu) = metric.bleu {
        let _ = writeln!(out, "<tr><td>BLEU</td><td>{bleu:.2}</td></tr>");
    }
    if let Some(fkgl) = metric.fkgl {
        let _ = writeln!(out, "<tr><td>FKGL</td><td>{fkgl:.2}</td></tr>");
    }
    for (name, value) in &metric.extras {
        let _ = writeln!(out, "<tr><td>{}</td><td>{value:.2}</td></tr>", escape(name));
    }
    out.push_str("</tbody>\n</table>\n");

    out.push_str(
        "<table>\n<thead><tr><th>Transformation</th><th>F1 (%)</th></tr></thead>\n<tbody>\n",
    );
    for t in Transformation::ALL {
        let _ = writeln!(
            out,
            "<tr><td>{}</td><td>{:.2}</td></tr>",
            t.name(),
            100.0 * bundle.transformations.get(t)
        );
    }
    out.push_str("</tbody>\n</table>\n");
}

fn comparison_section(out: &mut String, bundle: &ReportBundle) {
    out.push_str("<h2 id=\"system-vs-reference\">System vs. Reference</h2>\n");
    let _ = writeln!(
        out,
        "<p class=\"meta\">Reference column: one of the {} reference(s) sampled per instance \
         (seed {}).</p>",
        bundle.reference_count, bundle.seed
    );
    out.push_str(
        "<table>\n<thead><tr><th>Feature</th><th>System</th><th>Reference</th></tr></thead>\n<tbody>\n",
    );
    feature_rows(out, &bundle.system_qe, &bundle.reference_qe);
    out.push_str("</tbody>\n</table>\n");
}

fn distributions_section(out: &mut String, bundle: &ReportBundle) {
    out.push_str("<h2 id=\"distributions\">Feature Distributions</h2>\n");
    let compression: Vec<f64> = bundle
        .instance_features
        .iter()
        .map(|f| f.compression_ratio)
        .collect();
    let similarity: Vec<f64> = bundle
        .instance_features
        .iter()
        .map(|f| f.levenshtein_similarity)
        .collect();
    out.push_str(&histogram_svg("Compression ratio", &compression, HISTOGRAM_BINS));
    out.push_str(&histogram_svg("Levenshtein similarity", &similarity, HISTOGRAM_BINS));
}

fn breakdown_section(out: &mut String, bundle: &ReportBundle) {
    out.push_str("<h2 id=\"length-breakdown\">Breakdown by Source Length</h2>\n");
    out.push_str(
        "<table>\n<thead><tr><th>Source length (tokens)</th><th>Instances</th>\
         <th>Compression</th><th>Similarity</th><th>Splits</th><th>Exact matches</th>\
         </tr></thead>\n<tbody>\n",
    );
    for bucket in &bundle.buckets {
        match &bucket.features {
            None => {
                let _ = writeln!(
                    out,
                    "<tr><td>–</td><td>0</td><td>–</td><td>–</td><td>–</td><td>–</td></tr>"
                );
            }
            Some(f) => {
                let _ = writeln!(
                    out,
                    "<tr><td>{}–{}</td><td>{}</td><td>{:.2}</td><td>{:.2}</td><td>{:.2}</td>\
                     <td>{:.2}</td></tr>",
                    bucket.min_tokens,
                    bucket.max_tokens,
                    bucket.count,
                    f.compression_ratio,
                    f.levenshtein_similarity,
                    f.sentence_splits,
                    f.exact_match
                );
            }
        }
    }
    out.push_str("</tbody>\n</table>\n");
}

fn samples_section(out: &mut String, bundle: &ReportBundle) {
    out.push_str("<h2 id=\"samples\">Qualitative Samples</h2>\n");
    out.push_str(
        "<p class=\"legend\"><span class=\"hl-delete\">delete</span>\
         <span class=\"hl-move\">move</span><span class=\"hl-replace\">replace</span>\
         <span class=\"hl-addition\">addition</span></p>\n",
    );
    for (category, instances) in &bundle.samples {
        let _ = writeln!(out, "<h3>{}</h3>", category.title());
        if instances.is_empty() {
            out.push_str("<p class=\"empty\">No instances in this category.</p>\n");
            continue;
        }
        for sample in instances {
            let _ = writeln!(
                out,
                "<div class=\"sample\"><p class=\"tag\">#{} · compression {:.2} · similarity \
                 {:.2} · splits {:.2}</p>",
                sample.index,
                sample.features.compression_ratio,
                sample.features.levenshtein_similarity,
                sample.features.sentence_splits
            );
            let _ = writeln!(
                out,
                "<p><strong>Source:</strong> {}</p>",
                render_tokens(&sample.source_tokens, sample, Side::Source)
            );
            let _ = write!(
                out,
                "<p><strong>Output:</strong> {}</p>\n</div>\n",
                render_tokens(&sample.output_tokens, sample, Side::Output)
            );
        }
    }
}

/// Render the bundle as one self-contained HTML document. Byte-deterministic
/// for a fixed bundle.
pub fn render_html(bundle: &ReportBundle) -> String {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n");
    let _ = writeln!(
        out,
        "<title>Simplification evaluation: {}</title>",
        escape(&bundle.system_name)
    );
    let _ = write!(out, "<style>\n{STYLE}</style>\n</head>\n<body>\n");
    let _ = writeln!(
        out,
        "<h1>Simplification evaluation report: {}</h1>",
        escape(&bundle.system_name)
    );
    let _ = writeln!(
        out,
        "<p class=\"meta\">{} instances · {} reference(s) per instance · seed {}</p>",
        bundle.instance_count, bundle.reference_count, bundle.seed
    );

    scores_section(&mut out, bundle);
    comparison_section(&mut out, bundle);
    distributions_section(&mut out, bundle);
    breakdown_section(&mut out, bundle);
    samples_section(&mut out, bundle);

    out.push_str("</body>\n</html>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::EvalCorpus;
    use crate::report::{build_bundle, ReportOptions};

    fn fixture_bundle() -> ReportBundle {
        let corpus = EvalCorpus::new(
            vec![
                "The quick brown fox jumps over the lazy dog.".into(),
                "An extraordinary bureaucrat wrote a long report, and nobody read it.".into(),
                "The cat sat on the mat.".into(),
            ],
            Some(vec![
                "The quick fox jumps. The dog is lazy.".into(),
                "A bureaucrat wrote a report.".into(),
                "The cat sat on the mat.".into(),
            ]),
            vec![vec![
                "The fox jumps over the dog.".into(),
                "A bureaucrat wrote a long report. Nobody read it.".into(),
                "The cat sat on the mat.".into(),
            ]],
        )
        .unwrap();
        build_bundle(&corpus, None, None, &ReportOptions::default()).unwrap()
    }

    #[test]
    fn render_is_byte_deterministic() {
        let bundle = fixture_bundle();
        assert_eq!(render_html(&bundle), render_html(&bundle));
    }

    #[test]
    fn all_sections_present() {
        let html = render_html(&fixture_bundle());
        for heading in [
            "Scores",
            "System vs. Reference",
            "Feature Distributions",
            "Breakdown by Source Length",
            "Qualitative Samples",
        ] {
            assert!(html.contains(heading), "missing section {heading:?}");
        }
        assert!(html.starts_with("<!DOCTYPE html>"));
    }

    #[test]
    fn no_external_resources() {
        let html = render_html(&fixture_bundle());
        for needle in ["http://", "https://", "src=", "href="] {
            let allowed = needle == "http://" && html.contains("http://www.w3.org/2000/svg");
            let hits = html.matches(needle).count();
            if allowed {
                assert_eq!(hits, html.matches("http://www.w3.org/2000/svg").count());
            } else {
                assert_eq!(hits, 0, "found external resource marker {needle:?}");
            }
        }
    }

    #[test]
    fn escaping_covers_markup_characters() {
        assert_eq!(escape("a<b>&\"c'"), "a&lt;b&gt;&amp;&quot;c&#39;");
    }
}
