//! Reference-independent quality-estimation features over (source, output)
//! sentence pairs: compression ratio, Levenshtein similarity, sentence
//! splits, exact matches, added/deleted word proportions and a log-rank
//! lexical complexity score.
//!
//! Conventions, pinned: compression and similarity are character-based after
//! whitespace normalization; added/deleted proportions count token types
//! missing from the other side, normalized by the sentence's own token
//! count; lexical complexity is the nearest-rank third quartile of ln(rank)
//! over the output's alphabetic token occurrences, with out-of-vocabulary
//! words ranked at the table size.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::{
    fold_case, levenshtein_distance, normalize_whitespace, split_sentences, tokenize, TokenScheme,
};

/// Word-frequency ranks, 1 = most frequent. Immutable after load.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    ranks: HashMap<String, u64>,
    warnings: Vec<String>,
}

impl FrequencyTable {
    /// Build from words already ordered by descending frequency. Duplicates
    /// keep their first rank and emit a warning.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut ranks = HashMap::new();
        let mut warnings = Vec::new();
        for word in words {
            let word = fold_case(word.as_ref());
            let next_rank = ranks.len() as u64 + 1;
            match ranks.entry(word) {
                std::collections::hash_map::Entry::Occupied(entry) => {
                    warnings.push(format!("duplicate word {:?} ignored", entry.key()));
                }
                std::collections::hash_map::Entry::Vacant(entry) => {
                    entry.insert(next_rank);
                }
            }
        }
        FrequencyTable { ranks, warnings }
    }

    /// Load from a UTF-8 text file, one entry per line, `word<TAB>count` or
    /// a bare word; line order is the frequency order.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::NotFound(path.to_path_buf()));
        }
        let reader = BufReader::new(std::fs::File::open(path)?);
        let mut words = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let word = line.split('\t').next().unwrap_or("").trim();
            if !word.is_empty() {
                words.push(word.to_string());
            }
        }
        Ok(Self::from_words(words))
    }

    pub fn size(&self) -> u64 {
        self.ranks.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Rank of a word; unknown words rank at the table size (maximally rare).
    pub fn rank(&self, word: &str) -> u64 {
        self.ranks
            .get(&fold_case(word))
            .copied()
            .unwrap_or_else(|| self.size())
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Features of a single (source, output) pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InstanceFeatures {
    pub compression_ratio: f64,
    pub levenshtein_similarity: f64,
    pub sentence_splits: f64,
    pub exact_match: bool,
    pub added_proportion: f64,
    pub deleted_proportion: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexical_complexity: Option<f64>,
}

/// Corpus aggregates: arithmetic means, with `exact_match` becoming the
/// proportion of untouched sources. `lexical_complexity` averages over the
/// instances where it was computable.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AggregateFeatures {
    pub compression_ratio: f64,
    pub levenshtein_similarity: f64,
    pub sentence_splits: f64,
    pub exact_match: f64,
    pub added_proportion: f64,
    pub deleted_proportion: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexical_complexity: Option<f64>,
}

fn token_types(sentence: &str) -> BTreeSet<String> {
    tokenize(sentence, TokenScheme::Standard)
        .into_iter()
        .map(|t| t.lowercased)
        .collect()
}

/// Nearest-rank third quartile: the value at 1-based index `ceil(0.75 * m)`
/// of the ascending sort.
fn third_quartile(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let index = (0.75 * values.len() as f64).ceil() as usize;
    Some(values[index.max(1) - 1])
}

/// Log-rank lexical complexity of a sentence: Q3 of ln(rank) over its
/// alphabetic token occurrences. `None` when no token qualifies.
pub fn lexical_complexity(sentence: &str, table: &FrequencyTable) -> Option<f64> {
    if table.is_empty() {
        return None;
    }
    let log_ranks: Vec<f64> = tokenize(sentence, TokenScheme::Standard)
        .iter()
        .filter(|t| t.surface.chars().all(char::is_alphabetic))
        .map(|t| (table.rank(&t.lowercased) as f64).ln())
        .collect();
    third_quartile(log_ranks)
}

/// Compute the per-instance features for one (source, output) pair.
pub fn compute_features(
    source: &str,
    output: &str,
    table: Option<&FrequencyTable>,
) -> Result<InstanceFeatures> {
    let source_norm = normalize_whitespace(source);
    let output_norm = normalize_whitespace(output);
    if source_norm.is_empty() {
        return Err(Error::invalid("source sentence is empty"));
    }

    let source_chars = source_norm.chars().count();
    let output_chars = output_norm.chars().count();
    let max_chars = source_chars.max(output_chars);

    let source_tokens: Vec<String> = tokenize(source, TokenScheme::Standard)
        .into_iter()
        .map(|t| t.lowercased)
        .collect();
    let output_tokens: Vec<String> = tokenize(output, TokenScheme::Standard)
        .into_iter()
        .map(|t| t.lowercased)
        .collect();
    let source_types = token_types(source);
    let output_types = token_types(output);

    let added_proportion = if output_tokens.is_empty() {
        0.0
    } else {
        output_types.difference(&source_types).count() as f64 / output_tokens.len() as f64
    };
    let deleted_proportion =
        source_types.difference(&output_types).count() as f64 / source_tokens.len() as f64;

    Ok(InstanceFeatures {
        compression_ratio: output_chars as f64 / source_chars as f64,
        levenshtein_similarity: 1.0
            - levenshtein_distance(&source_norm, &output_norm) as f64 / max_chars as f64,
        sentence_splits: split_sentences(output).len() as f64
            / split_sentences(source).len() as f64,
        exact_match: source_norm == output_norm,
        added_proportion,
        deleted_proportion,
        lexical_complexity: table.and_then(|t| lexical_complexity(output, t)),
    })
}

/// Arithmetic means of the per-instance features.
pub fn aggregate_features(instances: &[InstanceFeatures]) -> Result<AggregateFeatures> {
    if instances.is_empty() {
        return Err(Error::invalid("cannot aggregate zero instances"));
    }
    let n = instances.len() as f64;
    let mean = |f: fn(&InstanceFeatures) -> f64| instances.iter().map(f).sum::<f64>() / n;

    let complexities: Vec<f64> = instances
        .iter()
        .filter_map(|i| i.lexical_complexity)
        .collect();
    let lexical_complexity = if complexities.is_empty() {
        None
    } else {
        Some(complexities.iter().sum::<f64>() / complexities.len() as f64)
    };

    Ok(AggregateFeatures {
        compression_ratio: mean(|i| i.compression_ratio),
        levenshtein_similarity: mean(|i| i.levenshtein_similarity),
        sentence_splits: mean(|i| i.sentence_splits),
        exact_match: instances.iter().filter(|i| i.exact_match).count() as f64 / n,
        added_proportion: mean(|i| i.added_proportion),
        deleted_proportion: mean(|i| i.deleted_proportion),
        lexical_complexity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_instance() {
        let f = compute_features("The cat sat.", "The cat sat.", None).unwrap();
        assert_eq!(f.compression_ratio, 1.0);
        assert_eq!(f.levenshtein_similarity, 1.0);
        assert_eq!(f.sentence_splits, 1.0);
        assert!(f.exact_match);
        assert_eq!(f.added_proportion, 0.0);
        assert_eq!(f.deleted_proportion, 0.0);
    }

    #[test]
    fn whitespace_differences_do_not_break_exactness() {
        let f = compute_features("a  b", "a b", None).unwrap();
        assert!(f.exact_match);
        assert_eq!(f.compression_ratio, 1.0);
    }

    #[test]
    fn empty_output_against_nonempty_source() {
        let f = compute_features("abc", "", None).unwrap();
        assert_eq!(f.compression_ratio, 0.0);
        assert_eq!(f.levenshtein_similarity, 0.0);
        assert_eq!(f.sentence_splits, 0.0);
        assert!(!f.exact_match);
        assert_eq!(f.added_proportion, 0.0);
        assert_eq!(f.deleted_proportion, 1.0);
    }

    #[test]
    fn empty_source_rejected() {
        assert!(compute_features("", "out", None).is_err());
        assert!(compute_features("  \n ", "out", None).is_err());
    }

    #[test]
    fn split_ratio_counts_sentences() {
        let f = compute_features("A b, c d.", "A b. C d.", None).unwrap();
        assert_eq!(f.sentence_splits, 2.0);
    }

    #[test]
    fn hand_derived_quartile_fixture() {
        // ranks: the -> 1, cat -> 2; log-ranks {0, ln 2};
        // nearest-rank Q3 over 2 values is the second one
        let table = FrequencyTable::from_words(["the", "cat", "perambulate"]);
        let f = compute_features("the dog", "the cat", Some(&table)).unwrap();
        let expected = 2.0f64.ln();
        assert!((f.lexical_complexity.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn unknown_words_rank_at_table_size() {
        let table = FrequencyTable::from_words(["the", "cat", "perambulate"]);
        assert_eq!(table.rank("zyzzyva"), 3);
        assert_eq!(table.rank("the"), 1);
        let score = lexical_complexity("zyzzyva", &table).unwrap();
        assert!((score - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn quartile_is_over_occurrences_not_types() {
        let table = FrequencyTable::from_words(["a", "z"]);
        // occurrences [a, a, a, z]: Q3 index ceil(3) = 3 -> ln(1) = 0
        let score = lexical_complexity("a a a z", &table).unwrap();
        assert_eq!(score, 0.0);
        // types would have given ln 2 here
    }

    #[test]
    fn duplicate_table_entries_warn_and_keep_first_rank() {
        let table = FrequencyTable::from_words(["the", "The", "cat"]);
        assert_eq!(table.size(), 2);
        assert_eq!(table.rank("the"), 1);
        assert_eq!(table.rank("cat"), 2);
        assert_eq!(table.warnings().len(), 1);
    }

    #[test]
    fn table_load_parses_both_line_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("freq.txt");
        std::fs::write(&path, "the\t1000\ncat\nmat\t10\n").unwrap();
        let table = FrequencyTable::load(&path).unwrap();
        assert_eq!(table.size(), 3);
        assert_eq!(table.rank("cat"), 2);
        assert_eq!(table.rank("mat"), 3);
    }

    #[test]
    fn table_load_missing_file() {
        assert!(matches!(
            FrequencyTable::load(Path::new("/nonexistent/freq.txt")),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn aggregates_mean_and_proportion() {
        let a = compute_features("a b.", "a b.", None).unwrap();
        let b = compute_features("a b.", "c.", None).unwrap();
        let agg = aggregate_features(&[a, b]).unwrap();
        assert!((agg.exact_match - 0.5).abs() < 1e-12);
        assert!(
            (agg.compression_ratio - (a.compression_ratio + b.compression_ratio) / 2.0).abs()
                < 1e-12
        );
        // single instance aggregates to itself
        let single = aggregate_features(&[a]).unwrap();
        assert_eq!(single.compression_ratio, a.compression_ratio);
        assert_eq!(single.exact_match, 1.0);
    }

    #[test]
    fn aggregate_requires_instances() {
        assert!(aggregate_features(&[]).is_err());
    }

    proptest! {
        #[test]
        fn proportions_stay_in_unit_interval(
            source in "[a-e .]{1,30}",
            output in "[a-e .]{0,30}",
        ) {
            prop_assume!(!normalize_whitespace(&source).is_empty());
            let f = compute_features(&source, &output, None).unwrap();
            prop_assert!((0.0..=1.0).contains(&f.added_proportion));
            prop_assert!((0.0..=1.0).contains(&f.deleted_proportion));
            prop_assert!((0.0..=1.0).contains(&f.levenshtein_similarity));
            prop_assert!(f.compression_ratio >= 0.0);
        }

        #[test]
        fn duplicating_output_increases_compression(source in "[a-e]{3,10}", output in "[a-e]{1,10}") {
            let base = compute_features(&source, &output, None).unwrap();
            let doubled = format!("{output} {output}");
            let bigger = compute_features(&source, &doubled, None).unwrap();
            prop_assert!(bigger.compression_ratio > base.compression_ratio);
        }

        #[test]
        fn q3_monotone_under_rank_increase(
            ranks in proptest::collection::vec(1u64..50, 1..12),
            pick in 0usize..12,
            bump in 1u64..20,
        ) {
            let pick = pick % ranks.len();
            let base: Vec<f64> = ranks.iter().map(|&r| (r as f64).ln()).collect();
            let mut raised = ranks.clone();
            raised[pick] += bump;
            let after: Vec<f64> = raised.iter().map(|&r| (r as f64).ln()).collect();
            let q_base = third_quartile(base).unwrap();
            let q_after = third_quartile(after).unwrap();
            prop_assert!(q_after >= q_base - 1e-12);
        }

        #[test]
        fn aggregate_matches_direct_mean(
            pairs in proptest::collection::vec(("[a-d .]{1,15}", "[a-d .]{0,15}"), 1..6)
        ) {
            let mut instances = Vec::new();
            for (s, o) in &pairs {
                if normalize_whitespace(s).is_empty() { continue; }
                instances.push(compute_features(s, o, None).unwrap());
            }
            prop_assume!(!instances.is_empty());
            let agg = aggregate_features(&instances).unwrap();
            let n = instances.len() as f64;
            let direct: f64 = instances.iter().map(|i| i.sentence_splits).sum::<f64>() / n;
            prop_assert!((agg.sentence_splits - direct).abs() < 1e-12);
            let exact: f64 = instances.iter().filter(|i| i.exact_match).count() as f64 / n;
            prop_assert!((agg.exact_match - exact).abs() < 1e-12);
        }
    }
}
