use crate::textproc::{token_syllables, AnnotatedText, Coarse};

pub const LONG_SENTENCE: usize = 35;
pub const SHORT_SENTENCE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readability {
    pub flesch: f64,
    pub gunning_fog: f64,
    pub avg_sentence_len: f64,
    pub sentence_len_std: f64,
    pub n_long_sentences: usize,
    pub n_short_sentences: usize,
    pub length_chars: usize,
}

/// Three or more syllables, not a proper name, and not only reaching three
/// through an -es/-ed ending.
fn is_complex(lower: &str, coarse: Coarse) -> bool {
    if coarse == Coarse::Propn || !lower.chars().any(char::is_alphabetic) {
        return false;
    }
    let n = token_syllables(lower);
    if n < 3 {
        return false;
    }
    for suffix in ["es", "ed"] {
        if let Some(stem) = lower.strip_suffix(suffix) {
            if !stem.is_empty() && token_syllables(stem) < 3 {
                return false;
            }
        }
    }
    true
}

/// `None` when the text has no sentences.
pub fn readability(a: &AnnotatedText) -> Option<Readability> {
    let lens: Vec<usize> = a
        .sentences
        .iter()
        .map(|r| a.tokens[r.clone()].iter().filter(|t| t.is_word).count())
        .collect();
    let words: usize = lens.iter().sum();
    if lens.is_empty() || words == 0 {
        return None;
    }
    let mut syllables = 0usize;
    let mut complex = 0usize;
    for (t, tag) in a.tokens.iter().zip(&a.tags) {
        if !t.is_word {
            continue;
        }
        syllables += token_syllables(&t.lower);
        if is_complex(&t.lower, tag.coarse) {
            complex += 1;
        }
    }
    let s = lens.len() as f64;
    let w = words as f64;
    let mean = w / s;
    let var = lens.iter().map(|&l| (l as f64 - mean).powi(2)).sum::<f64>() / s;
    Some(Readability {
        flesch: 206.835 - 1.015 * (w / s) - 84.6 * (syllables as f64 / w),
        gunning_fog: 0.4 * ((w / s) + 100.0 * (complex as f64 / w)),
        avg_sentence_len: mean,
        sentence_len_std: var.sqrt(),
        n_long_sentences: lens.iter().filter(|&&l| l >= LONG_SENTENCE).count(),
        n_short_sentences: lens.iter().filter(|&&l| l <= SHORT_SENTENCE).count(),
        length_chars: a.char_len,
    })
}
