//! Word-level transformation analysis: align an original sentence with a
//! rewritten one, label every source token as DELETE / MOVE / REPLACE /
//! COPY, and score a system's transformations against reference labelings.
//!
//! The aligner is a greedy best-first one-to-one matcher over lexical
//! similarity, pinned as follows: exact lowercase match scores 1.0, a match
//! after suffix-stripping stemming scores 0.9, anything else scores the
//! normalized character similarity `1 - dist / max(len)` and is accepted
//! only at 0.5 or above. Ties break on the smallest relative-position
//! difference, then the smallest source index, then the smallest target
//! index, so alignments are fully deterministic.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::{levenshtein_distance, tokenize, Token, TokenScheme};

/// Per-source-token transformation labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transformation {
    Delete,
    Move,
    Replace,
    Copy,
}

impl Transformation {
    pub const ALL: [Transformation; 4] = [
        Transformation::Delete,
        Transformation::Move,
        Transformation::Replace,
        Transformation::Copy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Transformation::Delete => "delete",
            Transformation::Move => "move",
            Transformation::Replace => "replace",
            Transformation::Copy => "copy",
        }
    }
}

/// One-to-one token alignment between a source and a target sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordAlignment {
    pairs: Vec<(usize, usize)>,
    source_len: usize,
    target_len: usize,
}

impl WordAlignment {
    /// Aligned (source, target) index pairs, sorted by source index.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn target_of(&self, source_index: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|&&(i, _)| i == source_index)
            .map(|&(_, j)| j)
    }

    pub fn is_target_aligned(&self, target_index: usize) -> bool {
        self.pairs.iter().any(|&(_, j)| j == target_index)
    }
}

/// Labels over the source tokens of an aligned sentence pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationLabels {
    labels: Vec<Transformation>,
}

impl TransformationLabels {
    pub fn labels(&self) -> &[Transformation] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn count(&self, transformation: Transformation) -> usize {
        self.labels.iter().filter(|&&l| l == transformation).count()
    }
}

/// Corpus-level per-transformation F1 scores in [0, 1]. The sentence-level
/// value for a multi-reference instance is the maximum over its references;
/// the corpus value is the mean of the sentence-level values.
#[derive(Debug, Clone, Serialize)]
pub struct TransformationScores {
    pub f1: BTreeMap<Transformation, f64>,
}

impl TransformationScores {
    pub fn get(&self, transformation: Transformation) -> f64 {
        self.f1.get(&transformation).copied().unwrap_or(0.0)
    }
}

/// Strip one of the suffixes s, es, ed, ing, ly (longest first) when the
/// remainder keeps at least 3 characters.
fn stem(word: &str) -> String {
    for suffix in ["ing", "es", "ed", "ly", "s"] {
        if let Some(remainder) = word.strip_suffix(suffix) {
            if remainder.chars().count() >= 3 {
                return remainder.to_string();
            }
        }
    }
    word.to_string()
}

fn similarity(a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    if stem(a) == stem(b) {
        return 0.9;
    }
    let max_len = a.chars().count().max(b.chars().count());
    if max_len == 0 {
        return 0.0;
    }
    1.0 - levenshtein_distance(a, b) as f64 / max_len as f64
}

/// Greedy best-first one-to-one alignment by descending similarity.
pub fn align_words(source: &[Token], target: &[Token]) -> WordAlignment {
    struct Candidate {
        i: usize,
        j: usize,
        similarity: f64,
        position_gap: f64,
    }

    let (src_len, tgt_len) = (source.len(), target.len());
    let mut candidates = Vec::new();
    for (i, s) in source.iter().enumerate() {
        for (j, t) in target.iter().enumerate() {
            let sim = similarity(&s.lowercased, &t.lowercased);
            if sim >= 0.5 {
                let position_gap =
                    (i as f64 / src_len as f64 - j as f64 / tgt_len as f64).abs();
                candidates.push(Candidate {
                    i,
                    j,
                    similarity: sim,
                    position_gap,
                });
            }
        }
    }

    candidates.sort_by(|a, b| {
        b.similarity
            .partial_cmp(&a.similarity)
            .unwrap()
            .then(a.position_gap.partial_cmp(&b.position_gap).unwrap())
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });

    let mut source_used = vec![false; src_len];
    let mut target_used = vec![false; tgt_len];
    let mut pairs = Vec::new();
    for c in candidates {
        if !source_used[c.i] && !target_used[c.j] {
            source_used[c.i] = true;
            target_used[c.j] = true;
            pairs.push((c.i, c.j));
        }
    }
    pairs.sort_unstable();

    WordAlignment {
        pairs,
        source_len: src_len,
        target_len: tgt_len,
    }
}

/// Label every source token. Unaligned tokens are DELETE; aligned tokens
/// whose lowercase surface changed are REPLACE; aligned pairs that cross
/// another aligned pair are MOVE; the rest are COPY. REPLACE takes
/// precedence over MOVE, MOVE over COPY.
pub fn label_transformations(
    source: &[Token],
    target: &[Token],
    alignment: &WordAlignment,
) -> Result<TransformationLabels> {
    if alignment.source_len() != source.len() || alignment.target_len() != target.len() {
        return Err(Error::invalid(format!(
            "alignment shape ({}, {}) does not match sentence pair ({}, {})",
            alignment.source_len(),
            alignment.target_len(),
            source.len(),
            target.len()
        )));
    }
    for &(i, j) in alignment.pairs() {
        if i >= source.len() || j >= target.len() {
            return Err(Error::invalid(format!(
                "alignment pair ({i}, {j}) out of bounds"
            )));
        }
    }

    let crosses = |i: usize, j: usize| {
        alignment
            .pairs()
            .iter()
            .any(|&(oi, oj)| (i < oi && j > oj) || (i > oi && j < oj))
    };

    let labels = source
        .iter()
        .enumerate()
        .map(|(i, token)| match alignment.target_of(i) {
            None => Transformation::Delete,
            Some(j) => {
                if token.lowercased != target[j].lowercased {
                    Transformation::Replace
                } else if crosses(i, j) {
                    Transformation::Move
                } else {
                    Transformation::Copy
                }
            }
        })
        .collect();

    Ok(TransformationLabels { labels })
}

/// Align and label in one step.
pub fn annotate_pair(source: &[Token], target: &[Token]) -> (WordAlignment, TransformationLabels) {
    let alignment = align_words(source, target);
    let labels =
        label_transformations(source, target, &alignment).expect("alignment built for this pair");
    (alignment, labels)
}

/// F1 of `predicted` against `gold` for one transformation over the source
/// positions. A transformation absent from both labelings counts as perfect
/// agreement (1.0).
fn label_f1(
    transformation: Transformation,
    gold: &TransformationLabels,
    predicted: &TransformationLabels,
) -> f64 {
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (g, p) in gold.labels().iter().zip(predicted.labels()) {
        match (*g == transformation, *p == transformation) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    if tp + fp + fn_ == 0 {
        1.0
    } else {
        2.0 * tp as f64 / (2.0 * tp as f64 + fp as f64 + fn_ as f64)
    }
}

/// Sentence-level per-transformation F1 for one instance: the labels of the
/// system output are scored against the labels each reference induces, and
/// the best reference wins per transformation.
pub fn instance_transformation_f1<S: AsRef<str>>(
    original: &str,
    output: &str,
    references: &[S],
    scheme: TokenScheme,
) -> Result<BTreeMap<Transformation, f64>> {
    if references.is_empty() {
        return Err(Error::invalid("at least one reference is required"));
    }
    let source = tokenize(original, scheme);
    let out_tokens = tokenize(output, scheme);
    let (_, predicted) = annotate_pair(&source, &out_tokens);

    let mut best: BTreeMap<Transformation, f64> = BTreeMap::new();
    for reference in references {
        let ref_tokens = tokenize(reference.as_ref(), scheme);
        let (_, gold) = annotate_pair(&source, &ref_tokens);
        for t in Transformation::ALL {
            let score = label_f1(t, &gold, &predicted);
            let entry = best.entry(t).or_insert(0.0);
            if score > *entry {
                *entry = score;
            }
        }
    }
    Ok(best)
}

/// Corpus-level transformation scores: mean over instances of the
/// sentence-level (max over references) per-transformation F1.
pub fn transformation_f1<S: AsRef<str>>(
    originals: &[S],
    outputs: &[S],
    references: &[Vec<S>],
    scheme: TokenScheme,
) -> Result<TransformationScores> {
    if originals.is_empty() {
        return Err(Error::invalid("corpus is empty"));
    }
    if outputs.len() != originals.len() {
        return Err(Error::invalid(format!(
            "corpus length mismatch: {} originals vs {} outputs",
            originals.len(),
            outputs.len()
        )));
    }
    for (r, refs) in references.iter().enumerate() {
        if refs.len() != originals.len() {
            return Err(Error::invalid(format!(
                "corpus length mismatch: {} originals vs {} sentences in reference {r}",
                originals.len(),
                refs.len()
            )));
        }
    }

    let mut sums: BTreeMap<Transformation, f64> =
        Transformation::ALL.iter().map(|&t| (t, 0.0)).collect();
    for i in 0..originals.len() {
        let instance_refs: Vec<&str> = references.iter().map(|r| r[i].as_ref()).collect();
        let scores = instance_transformation_f1(
            originals[i].as_ref(),
            outputs[i].as_ref(),
            &instance_refs,
            scheme,
        )?;
        for (t, score) in scores {
            *sums.get_mut(&t).unwrap() += score;
        }
    }

    let n = originals.len() as f64;
    Ok(TransformationScores {
        f1: sums.into_iter().map(|(t, sum)| (t, sum / n)).collect(),
    })
}
