//! Corpus SARI: scores the n-grams a system added, deleted and kept against
//! the original sentences and one or more references.
//!
//! Counting scheme, pinned for reproducibility. Per instance and n-gram g,
//! with input count `ci`, output count `co`, reference count `cr` summed over
//! all R references, and input/output counts scaled by R:
//!
//! * keep: candidates `min(R*ci, R*co)`, correct `min(min(R*ci, R*co), cr)`,
//!   reference mass `min(R*ci, cr)`;
//! * del: candidates `max(R*ci - R*co, 0)`, correct
//!   `min(max(R*ci - R*co, 0), max(R*ci - cr, 0))`, reference mass
//!   `max(R*ci - cr, 0)`;
//! * add: counted over distinct n-grams (types): candidates are output
//!   n-grams absent from the input, correct ones also occur in at least one
//!   reference, reference mass is the reference n-grams absent from the
//!   input.
//!
//! Counters accumulate over the whole corpus per n-gram order, then turn
//! into precision/recall/F1, with every zero-denominator component defined
//! as 0. F1 is used for all three operations and averaged over the orders;
//! the final score is 100 times the mean of the three operation F1s.

use serde::Serialize;

use super::TextConfig;
use crate::error::{Error, Result};
use crate::text::extract_ngrams;

/// The three rewrite operations SARI scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SariOperation {
    Add,
    Keep,
    Del,
}

/// Precision/recall/F1 for one operation at one n-gram order.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrderScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-order scores plus their average for one operation.
#[derive(Debug, Clone, Serialize)]
pub struct OperationScores {
    pub operation: SariOperation,
    pub per_order: Vec<OrderScores>,
    /// Arithmetic mean of the per-order F1 values.
    pub overall: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SariBreakdown {
    pub add: OperationScores,
    pub keep: OperationScores,
    pub del: OperationScores,
}

impl SariBreakdown {
    /// 100 * mean(F_add, F_keep, F_del).
    pub fn score(&self) -> f64 {
        100.0 * (self.add.overall + self.keep.overall + self.del.overall) / 3.0
    }
}

#[derive(Default, Clone, Copy)]
struct OpCounts {
    candidates: u64,
    correct: u64,
    mass: u64,
}

impl OpCounts {
    fn scores(&self) -> OrderScores {
        let precision = if self.candidates > 0 {
            self.correct as f64 / self.candidates as f64
        } else {
            0.0
        };
        let recall = if self.mass > 0 {
            self.correct as f64 / self.mass as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        OrderScores {
            precision,
            recall,
            f1,
        }
    }
}

/// Compute corpus SARI over parallel originals, system outputs and R
/// reference sequences (each of corpus length), n-gram orders 1..=max_order.
pub fn corpus_sari<S: AsRef<str>>(
    originals: &[S],
    outputs: &[S],
    references: &[Vec<S>],
    max_order: usize,
    config: &TextConfig,
) -> Result<(f64, SariBreakdown)> {
    validate_shapes(originals.len(), outputs.len(), references)?;
    if max_order < 1 {
        return Err(Error::invalid("max n-gram order must be >= 1"));
    }

    let num_refs = references.len() as u64;
    // counters[n - 1] = [add, keep, del]
    let mut counters = vec![[OpCounts::default(); 3]; max_order];

    for i in 0..originals.len() {
        let orig_tokens = config.tokens(originals[i].as_ref());
        let out_tokens = config.tokens(outputs[i].as_ref());
        let ref_tokens: Vec<Vec<String>> = references
            .iter()
            .map(|refs| config.tokens(refs[i].as_ref()))
            .collect();

        for n in 1..=max_order {
            let input_grams = extract_ngrams(&orig_tokens, n)?;
            let output_grams = extract_ngrams(&out_tokens, n)?;
            let mut ref_counts: std::collections::HashMap<Vec<String>, u64> =
                std::collections::HashMap::new();
            for tokens in &ref_tokens {
                for (gram, count) in extract_ngrams(tokens, n)?.iter() {
                    *ref_counts.entry(gram.clone()).or_insert(0) += count;
                }
            }

            let mut keys: std::collections::HashSet<&Vec<String>> = input_grams.keys().collect();
            keys.extend(output_grams.keys());
            keys.extend(ref_counts.keys());

            let [add, keep, del] = &mut counters[n - 1];
            for gram in keys {
                let ci = input_grams.count(gram) * num_refs;
                let co = output_grams.count(gram) * num_refs;
                let cr = ref_counts.get(gram).copied().unwrap_or(0);

                keep.candidates += ci.min(co);
                keep.correct += ci.min(co).min(cr);
                keep.mass += ci.min(cr);

                del.candidates += ci.saturating_sub(co);
                del.correct += ci.saturating_sub(co).min(ci.saturating_sub(cr));
                del.mass += ci.saturating_sub(cr);

                if ci == 0 {
                    if co > 0 {
                        add.candidates += 1;
                        if cr > 0 {
                            add.correct += 1;
                        }
                    }
                    if cr > 0 {
                        add.mass += 1;
                    }
                }
            }
        }
    }

    let breakdown = SariBreakdown {
        add: operation_scores(SariOperation::Add, &counters, 0),
        keep: operation_scores(SariOperation::Keep, &counters, 1),
        del: operation_scores(SariOperation::Del, &counters, 2),
    };
    Ok((breakdown.score(), breakdown))
}

fn operation_scores(
    operation: SariOperation,
    counters: &[[OpCounts; 3]],
    slot: usize,
) -> OperationScores {
    let per_order: Vec<OrderScores> = counters.iter().map(|ops| ops[slot].scores()).collect();
    let overall = per_order.iter().map(|s| s.f1).sum::<f64>() / per_order.len() as f64;
    OperationScores {
        operation,
        per_order,
        overall,
    }
}

fn validate_shapes<S: AsRef<str>>(
    originals: usize,
    outputs: usize,
    references: &[Vec<S>],
) -> Result<()> {
    if originals == 0 {
        return Err(Error::invalid("corpus is empty"));
    }
    if outputs != originals {
        return Err(Error::invalid(format!(
            "corpus length mismatch: {originals} originals vs {outputs} outputs"
        )));
    }
    if references.is_empty() {
        return Err(Error::invalid("at least one reference sequence is required"));
    }
    for (r, refs) in references.iter().enumerate() {
        if refs.len() != originals {
            return Err(Error::invalid(format!(
                "corpus length mismatch: {originals} originals vs {} sentences in reference {r}",
                refs.len()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(
        originals: &[&str],
        outputs: &[&str],
        references: &[Vec<&str>],
    ) -> (f64, SariBreakdown) {
        corpus_sari(
            originals,
            outputs,
            references,
            4,
            &TextConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn identity_corpus_scores_a_third() {
        // keep is perfect at every order; add and del have zero candidates
        // and zero reference mass, so both are 0 by the pinned convention.
        let text = "the quick brown fox jumps over the lazy dog .";
        let (sari, breakdown) = run(&[text], &[text], &[vec![text]]);
        assert!((sari - 100.0 / 3.0).abs() < 1e-12);
        assert!((breakdown.keep.overall - 1.0).abs() < 1e-12);
        assert_eq!(breakdown.add.overall, 0.0);
        assert_eq!(breakdown.del.overall, 0.0);
    }

    #[test]
    fn hand_enumerated_single_instance() {
        // input "a b c", output "a b d", reference "a b d", orders 1..4.
        // Enumerating every n-gram by hand gives keep f1 = (1,1,0,0)/4,
        // del f1 = (1,1,1,0)/4, add f1 = (1,1,1,0)/4, so SARI = 200/3.
        let (sari, breakdown) = run(&["a b c"], &["a b d"], &[vec!["a b d"]]);
        assert!((breakdown.keep.overall - 0.5).abs() < 1e-12);
        assert!((breakdown.del.overall - 0.75).abs() < 1e-12);
        assert!((breakdown.add.overall - 0.75).abs() < 1e-12);
        assert!((sari - 200.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn multi_reference_hand_derivation() {
        // Worked end to end by hand with the pinned counting scheme (R = 3):
        // keep f1 per order = 8/13, 2/7, 0, 0
        // del  f1 per order = 3/8, 6/11, 3/4, 6/7
        // add  f1 per order = 1/3, 0, 0, 0
        let (sari, breakdown) = run(
            &["About 95 species are currently accepted ."],
            &["About 95 you now get in ."],
            &[
                vec!["About 95 species are currently known ."],
                vec!["About 95 species are now accepted ."],
                vec!["95 species are now accepted ."],
            ],
        );
        let keep = [8.0 / 13.0, 2.0 / 7.0, 0.0, 0.0];
        let del = [3.0 / 8.0, 6.0 / 11.0, 3.0 / 4.0, 6.0 / 7.0];
        let add = [1.0 / 3.0, 0.0, 0.0, 0.0];
        for n in 0..4 {
            assert!((breakdown.keep.per_order[n].f1 - keep[n]).abs() < 1e-12, "keep n={n}");
            assert!((breakdown.del.per_order[n].f1 - del[n]).abs() < 1e-12, "del n={n}");
            assert!((breakdown.add.per_order[n].f1 - add[n]).abs() < 1e-12, "add n={n}");
        }
        let expected = 100.0
            * (keep.iter().sum::<f64>() / 4.0
                + del.iter().sum::<f64>() / 4.0
                + add.iter().sum::<f64>() / 4.0)
            / 3.0;
        assert!((sari - expected).abs() < 1e-12);
        assert!((sari - 31.350246975246975).abs() < 1e-12);
    }

    #[test]
    fn per_order_f1_matches_definition() {
        let (_, breakdown) = run(
            &["the big cat sat down", "a dog ran"],
            &["the cat sat", "a dog ran fast"],
            &[vec!["the cat sat down", "a dog ran"], vec!["the cat sat", "the dog ran"]],
        );
        for op in [&breakdown.add, &breakdown.keep, &breakdown.del] {
            assert_eq!(op.per_order.len(), 4);
            let mean: f64 =
                op.per_order.iter().map(|s| s.f1).sum::<f64>() / op.per_order.len() as f64;
            assert!((op.overall - mean).abs() < 1e-12);
            for s in &op.per_order {
                assert!((0.0..=1.0).contains(&s.precision));
                assert!((0.0..=1.0).contains(&s.recall));
                assert!((0.0..=1.0).contains(&s.f1));
                let expected = if s.precision + s.recall > 0.0 {
                    2.0 * s.precision * s.recall / (s.precision + s.recall)
                } else {
                    0.0
                };
                assert!((s.f1 - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn permutation_invariant_over_instances() {
        let originals = ["the cat sat on the mat", "a dog barked loudly", "birds can fly"];
        let outputs = ["the cat sat", "a dog barked", "birds fly high"];
        let refs = [
            vec!["the cat sat down", "the dog barked", "birds fly"],
            vec!["a cat sat on a mat", "a dog was loud", "a bird flies"],
        ];
        let (forward, _) = run(&originals, &outputs, &refs);

        let perm = [2usize, 0, 1];
        let p_orig: Vec<&str> = perm.iter().map(|&i| originals[i]).collect();
        let p_out: Vec<&str> = perm.iter().map(|&i| outputs[i]).collect();
        let p_refs: Vec<Vec<&str>> = refs
            .iter()
            .map(|r| perm.iter().map(|&i| r[i]).collect())
            .collect();
        let (permuted, _) = run(&p_orig, &p_out, &p_refs);
        assert_eq!(forward, permuted);
    }

    #[test]
    fn shape_errors() {
        let config = TextConfig::default();
        let empty: [&str; 0] = [];
        assert!(corpus_sari(&empty, &empty, &[Vec::<&str>::new()], 4, &config).is_err());
        assert!(corpus_sari(&["a"], &["a", "b"], &[vec!["a", "b"]], 4, &config).is_err());
        assert!(corpus_sari(&["a"], &["a"], &[vec!["a", "b"]], 4, &config).is_err());
        let no_refs: [Vec<&str>; 0] = [];
        assert!(corpus_sari(&["a"], &["a"], &no_refs, 4, &config).is_err());
        assert!(corpus_sari(&["a"], &["a"], &[vec!["a"]], 0, &config).is_err());
    }

    #[test]
    fn case_folding_is_configurable() {
        let cased = TextConfig {
            lowercase: false,
            ..TextConfig::default()
        };
        let (_, folded) =
            corpus_sari(&["The Cat"], &["the cat"], &[vec!["the cat"]], 2, &TextConfig::default())
                .unwrap();
        let (_, unfolded) =
            corpus_sari(&["The Cat"], &["the cat"], &[vec!["the cat"]], 2, &cased).unwrap();
        // lowercased: the output keeps every input n-gram; case-sensitive:
        // nothing overlaps, so keep collapses to zero.
        assert!((folded.keep.overall - 1.0).abs() < 1e-12);
        assert_eq!(unfolded.keep.overall, 0.0);
    }
}
