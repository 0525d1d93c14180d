//! Self-contained HTML evaluation reports: score tables, a system-vs-
//! reference feature comparison, feature-distribution histograms, a
//! breakdown by source sentence length, and highlighted qualitative samples.
//!
//! Sampling categories, pinned:
//!
//! * sentence-splitting: split ratio above 1, highest first;
//! * strong-rewrite: lowest Levenshtein similarity, exact copies excluded;
//! * high-compression: lowest compression ratio, below 1 only;
//! * lexical-simplification: at least one REPLACE with split ratio exactly 1,
//!   most replacements first;
//! * exact-copies: output equals source.
//!
//! Each category holds at most ten instances. Ties are broken by a seeded
//! shuffle, so a bundle renders byte-identically for a fixed seed.

mod html;
mod svg;

pub use html::render_html;

use crate::annotation::{
    annotate_pair, transformation_f1, Transformation, TransformationLabels, TransformationScores,
};
use crate::datasets::EvalCorpus;
use crate::error::{Error, Result};
use crate::metrics::{
    corpus_bleu, corpus_sari, fkgl, MetricRegistry, MetricReport, Smoothing, TextConfig,
};
use crate::qe::{aggregate_features, compute_features, AggregateFeatures, FrequencyTable,
    InstanceFeatures};
use crate::text::tokenize;

/// Deterministic splitmix64 stream for tie-shuffling and reference sampling.
pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub(crate) fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

pub const MAX_SAMPLES_PER_CATEGORY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SampleCategory {
    SentenceSplitting,
    StrongRewrite,
    HighCompression,
    LexicalSimplification,
    ExactCopies,
}

impl SampleCategory {
    pub const ALL: [SampleCategory; 5] = [
        SampleCategory::SentenceSplitting,
        SampleCategory::StrongRewrite,
        SampleCategory::HighCompression,
        SampleCategory::LexicalSimplification,
        SampleCategory::ExactCopies,
    ];

    pub fn title(&self) -> &'static str {
        match self {
            SampleCategory::SentenceSplitting => "Sentence splitting",
            SampleCategory::StrongRewrite => "Strong rewrites",
            SampleCategory::HighCompression => "High compression",
            SampleCategory::LexicalSimplification => "Lexical simplification",
            SampleCategory::ExactCopies => "Exact copies",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighlightKind {
    Delete,
    Move,
    Replace,
    Copy,
    Addition,
}

impl HighlightKind {
    fn from_label(label: Transformation) -> Option<Self> {
        match label {
            Transformation::Delete => Some(HighlightKind::Delete),
            Transformation::Move => Some(HighlightKind::Move),
            Transformation::Replace => Some(HighlightKind::Replace),
            // copies stay unhighlighted to keep the modifications visible
            Transformation::Copy => None,
        }
    }
}

/// Token range `[start, end)` on one side of a sampled instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HighlightSpan {
    pub side: Side,
    pub start: usize,
    pub end: usize,
    pub kind: HighlightKind,
}

#[derive(Debug, Clone)]
pub struct SampledInstance {
    pub index: usize,
    pub source_tokens: Vec<String>,
    pub output_tokens: Vec<String>,
    pub highlights: Vec<HighlightSpan>,
    pub features: InstanceFeatures,
}

#[derive(Debug, Clone)]
pub struct LengthBucket {
    /// Shortest and longest source token count among the members; (0, 0)
    /// for an empty bucket.
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub count: usize,
    pub features: Option<AggregateFeatures>,
}

/// Everything the HTML renderer needs.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub system_name: String,
    pub instance_count: usize,
    pub reference_count: usize,
    pub seed: u64,
    pub metrics: MetricReport,
    pub transformations: TransformationScores,
    pub system_qe: AggregateFeatures,
    pub reference_qe: AggregateFeatures,
    pub instance_features: Vec<InstanceFeatures>,
    pub buckets: Vec<LengthBucket>,
    pub samples: Vec<(SampleCategory, Vec<SampledInstance>)>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub system_name: String,
    pub text: TextConfig,
    pub max_order: usize,
    pub smoothing: Smoothing,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            system_name: "system".into(),
            text: TextConfig::default(),
            max_order: crate::metrics::DEFAULT_MAX_ORDER,
            smoothing: Smoothing::None,
            seed: 0,
        }
    }
}

/// Pick up to ten instances per category, deterministically for a fixed
/// seed. Returns instance indices per category, in the fixed category order.
pub fn sample_instances(
    features: &[InstanceFeatures],
    labels: &[TransformationLabels],
    seed: u64,
) -> Vec<(SampleCategory, Vec<usize>)> {
    assert_eq!(features.len(), labels.len());
    let mut order: Vec<usize> = (0..features.len()).collect();
    SplitMix64::new(seed).shuffle(&mut order);

    let pick = |category: SampleCategory| -> Vec<usize> {
        let mut candidates: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| match category {
                SampleCategory::SentenceSplitting => features[i].sentence_splits > 1.0,
                SampleCategory::StrongRewrite => features[i].levenshtein_similarity < 1.0,
                SampleCategory::HighCompression => features[i].compression_ratio < 1.0,
                SampleCategory::LexicalSimplification => {
                    labels[i].count(Transformation::Replace) >= 1
                        && features[i].sentence_splits == 1.0
                }
                SampleCategory::ExactCopies => features[i].exact_match,
            })
            .collect();
        match category {
            SampleCategory::SentenceSplitting => candidates.sort_by(|&a, &b| {
                features[b]
                    .sentence_splits
                    .partial_cmp(&features[a].sentence_splits)
                    .unwrap()
            }),
            SampleCategory::StrongRewrite => candidates.sort_by(|&a, &b| {
                features[a]
                    .levenshtein_similarity
                    .partial_cmp(&features[b].levenshtein_similarity)
                    .unwrap()
            }),
            SampleCategory::HighCompression => candidates.sort_by(|&a, &b| {
                features[a]
                    .compression_ratio
                    .partial_cmp(&features[b].compression_ratio)
                    .unwrap()
            }),
            SampleCategory::LexicalSimplification => candidates.sort_by(|&a, &b| {
                labels[b]
                    .count(Transformation::Replace)
                    .cmp(&labels[a].count(Transformation::Replace))
            }),
            SampleCategory::ExactCopies => {}
        }
        candidates.truncate(MAX_SAMPLES_PER_CATEGORY);
        candidates
    };

    SampleCategory::ALL
        .iter()
        .map(|&category| (category, pick(category)))
        .collect()
}

/// Partition instances into quartile buckets by source token count and
/// aggregate the features per bucket. Fewer than four instances collapse
/// into a single bucket.
pub fn length_breakdown(
    source_lengths: &[usize],
    features: &[InstanceFeatures],
) -> Vec<LengthBucket> {
    assert_eq!(source_lengths.len(), features.len());

    let build = |members: &[usize]| -> LengthBucket {
        if members.is_empty() {
            return LengthBucket {
                min_tokens: 0,
                max_tokens: 0,
                count: 0,
                features: None,
            };
        }
        let lens: Vec<usize> = members.iter().map(|&i| source_lengths[i]).collect();
        let member_features: Vec<InstanceFeatures> =
            members.iter().map(|&i| features[i]).collect();
        LengthBucket {
            min_tokens: *lens.iter().min().unwrap(),
            max_tokens: *lens.iter().max().unwrap(),
            count: members.len(),
            features: Some(aggregate_features(&member_features).expect("non-empty bucket")),
        }
    };

    let n = source_lengths.len();
    if n < 4 {
        return vec![build(&(0..n).collect::<Vec<_>>())];
    }

    let mut sorted = source_lengths.to_vec();
    sorted.sort_unstable();
    let quartile = |q: f64| sorted[(q * n as f64).ceil() as usize - 1];
    let (q1, q2, q3) = (quartile(0.25), quartile(0.5), quartile(0.75));

    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for (i, &len) in source_lengths.iter().enumerate() {
        let slot = if len <= q1 {
            0
        } else if len <= q2 {
            1
        } else if len <= q3 {
            2
        } else {
            3
        };
        buckets[slot].push(i);
    }
    buckets.iter().map(|members| build(members)).collect()
}

/// Merge per-token labels into contiguous highlight spans for both sides of
/// one instance.
fn highlight_spans(
    labels: &TransformationLabels,
    alignment: &crate::annotation::WordAlignment,
) -> Vec<HighlightSpan> {
    let mut spans = Vec::new();

    let mut push_merged = |side: Side, kinds: &[Option<HighlightKind>]| {
        let mut start = 0;
        while start < kinds.len() {
            match kinds[start] {
                None => start += 1,
                Some(kind) => {
                    let mut end = start + 1;
                    while end < kinds.len() && kinds[end] == Some(kind) {
                        end += 1;
                    }
                    spans.push(HighlightSpan {
                        side,
                        start,
                        end,
                        kind,
                    });
                    start = end;
                }
            }
        }
    };

    let source_kinds: Vec<Option<HighlightKind>> = labels
        .labels()
        .iter()
        .map(|&l| HighlightKind::from_label(l))
        .collect();
    push_merged(Side::Source, &source_kinds);

    let mut output_kinds: Vec<Option<HighlightKind>> = vec![None; alignment.target_len()];
    for (j, kind) in output_kinds.iter_mut().enumerate() {
        if !alignment.is_target_aligned(j) {
            *kind = Some(HighlightKind::Addition);
        }
    }
    for &(i, j) in alignment.pairs() {
        output_kinds[j] = HighlightKind::from_label(labels.labels()[i]);
    }
    push_merged(Side::Output, &output_kinds);

    spans
}

/// Evaluate the corpus and assemble everything the renderer needs. The
/// corpus must carry system outputs. A missing frequency table only drops
/// the lexical-complexity feature.
pub fn build_bundle(
    corpus: &EvalCorpus,
    table: Option<&FrequencyTable>,
    registry: Option<&MetricRegistry>,
    options: &ReportOptions,
) -> Result<ReportBundle> {
    let outputs = corpus
        .outputs()
        .ok_or_else(|| Error::invalid("report needs system outputs"))?;
    let originals = corpus.originals();
    let references = corpus.references();

    // system-side per-instance features
    let mut instance_features = Vec::with_capacity(corpus.len());
    for (original, output) in originals.iter().zip(outputs) {
        instance_features.push(compute_features(original, output, table)?);
    }
    let system_qe = aggregate_features(&instance_features)?;

    // reference side: one reference sampled per instance
    let mut rng = SplitMix64::new(options.seed);
    let mut reference_features = Vec::with_capacity(corpus.len());
    for (i, original) in originals.iter().enumerate() {
        let pick = rng.below(corpus.reference_count() as u64) as usize;
        reference_features.push(compute_features(original, &references[pick][i], table)?);
    }
    let reference_qe = aggregate_features(&reference_features)?;

    let (sari, breakdown) = corpus_sari(
        originals,
        outputs,
        references,
        options.max_order,
        &options.text,
    )?;
    let bleu = corpus_bleu(
        outputs,
        references,
        options.max_order,
        options.smoothing,
        &options.text,
    )?;
    let mut metrics = MetricReport {
        sari: Some(sari),
        sari_breakdown: Some(breakdown),
        bleu: Some(bleu),
        fkgl: Some(fkgl(outputs)?),
        extras: Default::default(),
    };
    if let Some(registry) = registry {
        metrics.extras = registry.evaluate_extras(corpus).values;
    }

    let transformations = transformation_f1(originals, outputs, references, options.text.scheme)?;

    // per-instance annotation for sampling and highlights
    let mut labels = Vec::with_capacity(corpus.len());
    let mut annotations = Vec::with_capacity(corpus.len());
    for (original, output) in originals.iter().zip(outputs) {
        let source_tokens = tokenize(original, options.text.scheme);
        let output_tokens = tokenize(output, options.text.scheme);
        let (alignment, instance_labels) = annotate_pair(&source_tokens, &output_tokens);
        labels.push(instance_labels.clone());
        annotations.push((source_tokens, output_tokens, alignment, instance_labels));
    }

    let samples = sample_instances(&instance_features, &labels, options.seed)
        .into_iter()
        .map(|(category, indices)| {
            let instances = indices
                .into_iter()
                .map(|i| {
                    let (source_tokens, output_tokens, alignment, instance_labels) =
                        &annotations[i];
                    SampledInstance {
                        index: i,
                        source_tokens: source_tokens.iter().map(|t| t.surface.clone()).collect(),
                        output_tokens: output_tokens.iter().map(|t| t.surface.clone()).collect(),
                        highlights: highlight_spans(instance_labels, alignment),
                        features: instance_features[i],
                    }
                })
                .collect();
            (category, instances)
        })
        .collect();

    let source_lengths: Vec<usize> = annotations.iter().map(|(s, _, _, _)| s.len()).collect();
    let buckets = length_breakdown(&source_lengths, &instance_features);

    Ok(ReportBundle {
        system_name: options.system_name.clone(),
        instance_count: corpus.len(),
        reference_count: corpus.reference_count(),
        seed: options.seed,
        metrics,
        transformations,
        system_qe,
        reference_qe,
        instance_features,
        buckets,
        samples,
    })
}
