//! Deterministic text primitives shared by every other module: tokenization,
//! normalization, n-gram extraction, edit distance, syllable counting and
//! sentence segmentation.
//!
//! All functions here are pure and total unless documented otherwise, and the
//! behaviour is pinned bit-exactly so that scores are reproducible across
//! runs and machines:
//!
//! * `standard` tokenization: each maximal run of alphanumeric characters is
//!   one token; every other non-whitespace character is a single-character
//!   token; any whitespace run (spaces, tabs, newlines) separates tokens.
//! * case folding is simple per-character lowercasing, no Unicode
//!   normalization.
//! * sentence segmentation is punctuation-driven with no abbreviation
//!   lexicon, so "v. 2.0" splits after "v." by design.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// How raw text is cut into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenScheme {
    /// Split on whitespace runs and separate punctuation from adjoining word
    /// characters. This is the scheme all metrics use by default.
    #[default]
    Standard,
    /// Split on whitespace runs only.
    Whitespace,
}

/// A single token with its case-folded form precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lowercased: String,
}

impl Token {
    fn new(surface: &str) -> Self {
        debug_assert!(!surface.is_empty());
        Token {
            surface: surface.to_string(),
            lowercased: fold_case(surface),
        }
    }

    /// Word tokens carry at least one letter or digit; pure punctuation does
    /// not count as a word (for FKGL and friends).
    pub fn is_word(&self) -> bool {
        self.surface.chars().any(|c| c.is_alphanumeric())
    }
}

/// Simple per-character case folding. `str::to_lowercase` applies
/// context-sensitive rules (final sigma); folding char by char keeps the
/// mapping position-independent.
pub fn fold_case(s: &str) -> String {
    s.chars().flat_map(char::to_lowercase).collect()
}

/// Cut `text` into tokens. Total: empty or all-whitespace input yields an
/// empty vector. Newlines are whitespace like any other, so they never
/// produce tokens of their own.
pub fn tokenize(text: &str, scheme: TokenScheme) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        match scheme {
            TokenScheme::Whitespace => tokens.push(Token::new(chunk)),
            TokenScheme::Standard => {
                let mut run = String::new();
                for c in chunk.chars() {
                    if c.is_alphanumeric() {
                        run.push(c);
                    } else {
                        if !run.is_empty() {
                            tokens.push(Token::new(&run));
                            run.clear();
                        }
                        tokens.push(Token::new(&c.to_string()));
                    }
                }
                if !run.is_empty() {
                    tokens.push(Token::new(&run));
                }
            }
        }
    }
    tokens
}

/// Pick the scoring form of each token: lowercased by default, raw surface
/// when case-sensitive scoring is requested.
pub fn token_strings(tokens: &[Token], lowercase: bool) -> Vec<String> {
    tokens
        .iter()
        .map(|t| {
            if lowercase {
                t.lowercased.clone()
            } else {
                t.surface.clone()
            }
        })
        .collect()
}

/// Collapse all whitespace runs to single spaces and trim the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A multiset of n-grams of one fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramMultiset {
    order: usize,
    counts: HashMap<Vec<String>, u64>,
}

impl NGramMultiset {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count(&self, gram: &[String]) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<String>, u64)> {
        self.counts.iter().map(|(g, &c)| (g, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<String>> {
        self.counts.keys()
    }

    /// Total number of windows, i.e. `max(0, len(tokens) - order + 1)`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Count every contiguous n-gram of `order` tokens.
pub fn extract_ngrams<S: AsRef<str>>(tokens: &[S], order: usize) -> Result<NGramMultiset> {
    if order < 1 {
        return Err(Error::invalid("n-gram order must be >= 1"));
    }
    let mut counts: HashMap<Vec<String>, u64> = HashMap::new();
    if tokens.len() >= order {
        for window in tokens.windows(order) {
            let gram: Vec<String> = window.iter().map(|t| t.as_ref().to_string()).collect();
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    Ok(NGramMultiset { order, counts })
}

/// Character-level Levenshtein distance, two-row dynamic programming.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let a_chars: Vec<char> = a.chars().collect();
    let b_chars: Vec<char> = b.chars().collect();
    if a_chars.is_empty() {
        return b_chars.len();
    }
    if b_chars.is_empty() {
        return a_chars.len();
    }

    let mut prev: Vec<usize> = (0..=b_chars.len()).collect();
    let mut cur = vec![0usize; b_chars.len() + 1];
    for (i, &ca) in a_chars.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b_chars.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b_chars.len()]
}

const VOWELS: [char; 6] = ['a', 'e', 'i', 'o', 'u', 'y'];

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// Heuristic syllable count: number of maximal vowel groups (a, e, i, o, u, y,
/// case-insensitive), minus one for a trailing silent 'e' (word ends in 'e'
/// but not 'le' and has more than one vowel group), floored at 1.
pub fn count_syllables(word: &str) -> Result<usize> {
    if word.is_empty() {
        return Err(Error::invalid("cannot count syllables of an empty word"));
    }
    let lower = fold_case(word);
    let chars: Vec<char> = lower.chars().collect();

    let mut groups = 0usize;
    let mut in_group = false;
    for &c in &chars {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }

    let silent_e = chars.last() == Some(&'e') && !lower.ends_with("le") && groups > 1;
    if silent_e {
        groups -= 1;
    }
    Ok(groups.max(1))
}

/// Split after '.', '!' or '?' when the terminator is followed by whitespace
/// or end of text. Segments are trimmed and never empty. Purely
/// punctuation-driven: no abbreviation handling.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        current.push(c);
        if matches!(c, '.' | '!' | '?') {
            let at_boundary = match chars.peek() {
                None => true,
                Some(&next) => next.is_whitespace(),
            };
            if at_boundary {
                let segment = current.trim();
                if !segment.is_empty() {
                    sentences.push(segment.to_string());
                }
                current.clear();
            }
        }
    }
    let tail = current.trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    sentences
}
