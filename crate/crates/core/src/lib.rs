//! Evaluation toolkit for sentence simplification systems.
//!
//! Given original sentences, system outputs and one or more reference
//! simplifications, this crate computes:
//!
//! * corpus metrics: SARI (with per-operation add/keep/del breakdowns),
//!   multi-reference BLEU and FKGL ([`metrics`]);
//! * word-level transformation accuracy against reference labelings
//!   ([`annotation`]);
//! * reference-independent quality-estimation features such as compression
//!   ratio and Levenshtein similarity ([`qe`]);
//! * a single-file HTML report with score tables, feature distributions,
//!   length breakdowns and highlighted samples ([`report`]).
//!
//! [`datasets`] ships shape-validated loaders and a fetch cache for the
//! common public test sets; [`text`] holds the pinned text primitives that
//! keep every score reproducible. Everything is deterministic: the same
//! inputs, options and seed always produce identical bytes.

pub mod annotation;
pub mod datasets;
pub mod error;
pub mod metrics;
pub mod qe;
pub mod report;
pub mod text;

pub use error::{Error, Result};
