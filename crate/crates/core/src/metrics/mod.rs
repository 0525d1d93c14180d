//! Corpus-level automatic metrics: SARI with per-operation breakdown,
//! multi-reference corpus BLEU, FKGL, and a registry hook for plugging in
//! external metrics.
//!
//! All metrics share one pinned text pipeline ([`TextConfig`]): `standard`
//! tokenization and lowercased tokens unless configured otherwise. Scores are
//! accumulated with integer counters in instance order, so results are
//! bit-identical across runs and invariant under corpus permutation.

mod bleu;
mod fkgl;
mod sari;

pub use bleu::{corpus_bleu, Smoothing};
pub use fkgl::{fkgl, fkgl_text};
pub use sari::{corpus_sari, OperationScores, OrderScores, SariBreakdown, SariOperation};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::datasets::EvalCorpus;
use crate::error::{Error, Result};
use crate::text::{self, TokenScheme};

/// How sentences are turned into scoring tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextConfig {
    pub scheme: TokenScheme,
    pub lowercase: bool,
}

impl Default for TextConfig {
    fn default() -> Self {
        TextConfig {
            scheme: TokenScheme::Standard,
            lowercase: true,
        }
    }
}

impl TextConfig {
    pub(crate) fn tokens(&self, sentence: &str) -> Vec<String> {
        text::token_strings(&text::tokenize(sentence, self.scheme), self.lowercase)
    }
}

/// Default n-gram order for SARI and BLEU.
pub const DEFAULT_MAX_ORDER: usize = 4;

/// Corpus-level scores for one evaluation run. `None` fields were not
/// selected. `sari` and `bleu` are on the 0-100 scale; `fkgl` is a grade
/// level and may be negative.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub sari: Option<f64>,
    pub sari_breakdown: Option<SariBreakdown>,
    pub bleu: Option<f64>,
    pub fkgl: Option<f64>,
    pub extras: BTreeMap<String, f64>,
}

impl MetricReport {
    pub fn empty() -> Self {
        MetricReport {
            sari: None,
            sari_breakdown: None,
            bleu: None,
            fkgl: None,
            extras: BTreeMap::new(),
        }
    }
}

/// Scorer signature for external plug-in metrics: the whole corpus in, a
/// single number out. Failures are reported as strings and captured
/// per-metric rather than aborting the evaluation.
pub type ExternalScorer = Box<dyn Fn(&EvalCorpus) -> std::result::Result<f64, String> + Send + Sync>;

/// Result of running the registered external scorers: values for the ones
/// that succeeded, diagnostics for the ones that failed.
#[derive(Debug, Default)]
pub struct ExtrasOutcome {
    pub values: BTreeMap<String, f64>,
    pub diagnostics: BTreeMap<String, String>,
}

/// Registry for external metrics (structural scorers and similar) that are
/// computed outside this crate but reported alongside the built-in ones.
#[derive(Default)]
pub struct MetricRegistry {
    scorers: BTreeMap<String, ExternalScorer>,
}

impl MetricRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a scorer under a unique name.
    pub fn register<F>(&mut self, name: impl Into<String>, scorer: F) -> Result<()>
    where
        F: Fn(&EvalCorpus) -> std::result::Result<f64, String> + Send + Sync + 'static,
    {
        let name = name.into();
        if self.scorers.contains_key(&name) {
            return Err(Error::invalid(format!(
                "external metric {name:?} is already registered"
            )));
        }
        self.scorers.insert(name, Box::new(scorer));
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.scorers.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.scorers.keys().map(String::as_str)
    }

    /// Run every registered scorer over the corpus. A failing scorer only
    /// loses its own value; the error text lands in `diagnostics`.
    pub fn evaluate_extras(&self, corpus: &EvalCorpus) -> ExtrasOutcome {
        let mut outcome = ExtrasOutcome::default();
        for (name, scorer) in &self.scorers {
            match scorer(corpus) {
                Ok(value) => {
                    outcome.values.insert(name.clone(), value);
                }
                Err(diag) => {
                    outcome.diagnostics.insert(name.clone(), diag);
                }
            }
        }
        outcome
    }
}
