//! Flesch-Kincaid Grade Level over one text or a list of texts:
//! `0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59`.
//!
//! Words are standard-scheme tokens containing at least one letter or digit,
//! so newlines and free-standing punctuation are never counted as words.
//! Sentences come from the punctuation-rule segmenter and syllables from the
//! vowel-group heuristic, both in [`crate::text`].

use crate::error::{Error, Result};
use crate::text::{count_syllables, split_sentences, tokenize, TokenScheme};

/// FKGL of a list of texts, each of which may hold several sentences.
/// Counts accumulate over the whole list before the ratios are taken.
pub fn fkgl<S: AsRef<str>>(texts: &[S]) -> Result<f64> {
    let mut words = 0u64;
    let mut sentences = 0u64;
    let mut syllables = 0u64;

    for text in texts {
        let text = text.as_ref();
        sentences += split_sentences(text).len() as u64;
        for token in tokenize(text, TokenScheme::Standard) {
            if token.is_word() {
                words += 1;
                syllables += count_syllables(&token.surface)? as u64;
            }
        }
    }

    if words == 0 {
        return Err(Error::invalid("FKGL needs at least one word"));
    }

    Ok(0.39 * (words as f64 / sentences as f64) + 11.8 * (syllables as f64 / words as f64)
        - 15.59)
}

/// FKGL of a single text.
pub fn fkgl_text(text: &str) -> Result<f64> {
    fkgl(&[text])
}
