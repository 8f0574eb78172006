//! Lexicon sentiment with modifier and negation handling.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/sentiment.tsv");
const NEGATIONS: [&str; 4] = ["no", "not", "n't", "never"];
/// Polarity factor for a negated chunk.
const NEGATION_FACTOR: f64 = -0.5;
const EXCLAMATION_BOOST: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub polarity: f64,
    pub subjectivity: f64,
    pub intensity: f64,
    /// Adverb-like words that scale the next known word.
    pub modifier: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: HashMap<String, Entry>,
}

impl SentimentLexicon {
    pub fn builtin() -> &'static SentimentLexicon {
        static LEX: OnceLock<SentimentLexicon> = OnceLock::new();
        LEX.get_or_init(|| SentimentLexicon::parse(BUILTIN).expect("shipped sentiment lexicon parses"))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SentimentLexicon> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SentimentLexicon::parse(&s)
    }

    /// Tab-separated `form polarity subjectivity intensity modifier`.
    pub fn parse(s: &str) -> Result<SentimentLexicon> {
        let mut entries = HashMap::new();
        for (n, line) in s.lines().enumerate() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Parse {
                line: n + 1,
                message: m.to_string(),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 {
                return Err(bad("expected 5 columns"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
            entries.insert(
                cols[0].to_string(),
                Entry {
                    polarity: num(cols[1])?,
                    subjectivity: num(cols[2])?,
                    intensity: num(cols[3])?,
                    modifier: cols[4] == "1",
                },
            );
        }
        Ok(SentimentLexicon { entries })
    }

    pub fn get(&self, word: &str) -> Option<&Entry> {
        self.entries.get(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

struct Chunk {
    p: f64,
    s: f64,
    i: f64,
    negated: bool,
}

/// (polarity, subjectivity) over lowercased tokens. Unmatched text gives (0, 0).
///
/// A known word opens a chunk unless the previous known word was a modifier,
/// in which case it is scaled by the modifier's intensity. A negation applies
/// to the next known word, surviving short words in between. Negated chunks
/// contribute `-0.5 * polarity`.
pub fn sentiment<'a>(lex: &SentimentLexicon, words: impl IntoIterator<Item = &'a str>) -> (f64, f64) {
    let mut chunks: Vec<Chunk> = Vec::new();
    let mut modifier = false;
    let mut negation = false;
    for w in words {
        if let Some(e) = lex.get(w) {
            if modifier && !chunks.is_empty() {
                let last = chunks.last_mut().unwrap();
                last.p = (e.polarity * last.i).clamp(-1.0, 1.0);
                last.s = (e.subjectivity * last.i).clamp(-1.0, 1.0);
                last.i = e.intensity;
            } else {
                chunks.push(Chunk {
                    p: e.polarity,
                    s: e.subjectivity,
                    i: e.intensity,
                    negated: false,
                });
            }
            if negation {
                let last = chunks.last_mut().unwrap();
                last.i = 1.0 / last.i;
                last.negated = true;
            }
            modifier = e.modifier;
            negation = NEGATIONS.contains(&w);
        } else {
            if NEGATIONS.contains(&w) {
                negation = true;
            } else if negation && w.trim_matches('\'').chars().count() > 1 {
                negation = false;
            }
            if negation && modifier {
                // "really not good"
                chunks.last_mut().unwrap().negated = true;
                negation = false;
            } else if modifier && w.chars().count() > 2 {
                modifier = false;
            }
            if w == "!" {
                if let Some(last) = chunks.last_mut() {
                    last.p = (last.p * EXCLAMATION_BOOST).clamp(-1.0, 1.0);
                }
            }
        }
    }
    if chunks.is_empty() {
        return (0.0, 0.0);
    }
    let n = chunks.len() as f64;
    let p: f64 = chunks
        .iter()
        .map(|c| if c.negated { c.p * NEGATION_FACTOR } else { c.p })
        .sum();
    let s: f64 = chunks.iter().map(|c| c.s).sum();
    (p / n, s / n)
}
