//! Multi-reference corpus BLEU: clipped n-gram precision per order,
//! geometric mean over the orders, brevity penalty from per-instance closest
//! reference lengths (ties to the shorter reference).

use std::collections::HashMap;

use super::TextConfig;
use crate::error::{Error, Result};
use crate::text::extract_ngrams;

/// Zero-precision handling. `None` leaves zero-match orders at zero, which
/// zeroes the whole score; `Epsilon` replaces a zero match count with 0.1
/// counts before dividing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Smoothing {
    #[default]
    None,
    Epsilon,
}

/// Corpus BLEU on the 0-100 scale.
pub fn corpus_bleu<S: AsRef<str>>(
    outputs: &[S],
    references: &[Vec<S>],
    max_order: usize,
    smoothing: Smoothing,
    config: &TextConfig,
) -> Result<f64> {
    if outputs.is_empty() {
        return Err(Error::invalid("corpus is empty"));
    }
    if max_order < 1 {
        return Err(Error::invalid("max n-gram order must be >= 1"));
    }
    if references.is_empty() {
        return Err(Error::invalid("at least one reference sequence is required"));
    }
    for (r, refs) in references.iter().enumerate() {
        if refs.len() != outputs.len() {
            return Err(Error::invalid(format!(
                "corpus length mismatch: {} outputs vs {} sentences in reference {r}",
                outputs.len(),
                refs.len()
            )));
        }
    }

    let mut matched = vec![0u64; max_order];
    let mut total = vec![0u64; max_order];
    let mut out_len = 0u64;
    let mut ref_len = 0u64;

    for i in 0..outputs.len() {
        let out_tokens = config.tokens(outputs[i].as_ref());
        let ref_tokens: Vec<Vec<String>> = references
            .iter()
            .map(|refs| config.tokens(refs[i].as_ref()))
            .collect();

        out_len += out_tokens.len() as u64;
        ref_len += closest_ref_len(out_tokens.len(), &ref_tokens) as u64;

        for n in 1..=max_order {
            let out_grams = extract_ngrams(&out_tokens, n)?;
            // clip against the maximum count of each n-gram over the references
            let mut max_ref_counts: HashMap<&Vec<String>, u64> = HashMap::new();
            let ref_grams: Vec<_> = ref_tokens
                .iter()
                .map(|tokens| extract_ngrams(tokens, n))
                .collect::<Result<_>>()?;
            for grams in &ref_grams {
                for (gram, count) in grams.iter() {
                    let entry = max_ref_counts.entry(gram).or_insert(0);
                    *entry = (*entry).max(count);
                }
            }

            total[n - 1] += out_grams.total();
            for (gram, count) in out_grams.iter() {
                let clip = max_ref_counts.get(gram).copied().unwrap_or(0);
                matched[n - 1] += count.min(clip);
            }
        }
    }

    if out_len == 0 {
        return Ok(0.0);
    }

    let mut log_sum = 0.0;
    for n in 0..max_order {
        if total[n] == 0 {
            return Ok(0.0);
        }
        let numerator = match (matched[n], smoothing) {
            (0, Smoothing::None) => return Ok(0.0),
            (0, Smoothing::Epsilon) => 0.1,
            (m, _) => m as f64,
        };
        log_sum += (numerator / total[n] as f64).ln();
    }

    let brevity_penalty = if out_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / out_len as f64).exp()
    };

    Ok(100.0 * brevity_penalty * (log_sum / max_order as f64).exp())
}

/// Reference length closest to the output length; ties go to the shorter
/// reference.
fn closest_ref_len(out_len: usize, ref_tokens: &[Vec<String>]) -> usize {
    let mut best = ref_tokens[0].len();
    for tokens in &ref_tokens[1..] {
        let len = tokens.len();
        let (d_new, d_best) = (len.abs_diff(out_len), best.abs_diff(out_len));
        if d_new < d_best || (d_new == d_best && len < best) {
            best = len;
        }
    }
    best
}
