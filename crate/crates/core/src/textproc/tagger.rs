//! Penn-tag perceptron tagger with a closed-class override lexicon.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::perceptron::{ModelReader, ModelWriter, Perceptron, Trainer};
use crate::error::{Error, Result};

static BUILTIN_MODEL: &[u8] = include_bytes!("../../data/tagger.stxp");

const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];

/// Tagdict admission: frequent and (almost) unambiguous words.
const TAGDICT_MIN_COUNT: usize = 20;
const TAGDICT_MIN_SHARE: f64 = 0.97;

fn closed_class(lower: &str) -> Option<&'static str> {
    Some(match lower {
        "the" | "a" | "an" | "these" | "those" | "every" | "each" => "DT",
        "i" | "you" | "he" | "she" | "it" | "we" | "they" | "me" | "him" | "her" | "us" | "them" => "PRP",
        "mine" | "yours" | "hers" | "ours" | "theirs" => "PRP",
        "myself" | "yourself" | "himself" | "herself" | "itself" | "ourselves" | "yourselves" | "themselves" => "PRP",
        "my" | "your" | "his" | "its" | "our" | "their" => "PRP$",
        "and" | "or" | "but" | "nor" => "CC",
        "of" | "with" | "from" | "into" | "onto" | "upon" | "during" | "without" | "within" | "among" | "between"
        | "against" | "toward" | "towards" | "despite" | "via" | "than" | "at" | "by" => "IN",
        "would" | "could" | "should" | "might" | "must" | "shall" | "'ll" => "MD",
        "is" => "VBZ",
        "am" | "are" | "'m" | "'re" => "VBP",
        "was" | "were" => "VBD",
        "been" => "VBN",
        "being" => "VBG",
        "be" => "VB",
        "not" | "n't" => "RB",
        "to" => "TO",
        "'ve" => "VBP",
        _ => return None,
    })
}

/// Modals that double as nouns or names are only forced when lowercase.
fn modal_if_lowercase(surface: &str) -> Option<&'static str> {
    match surface {
        "will" | "can" | "may" => Some("MD"),
        _ => None,
    }
}

fn forced(surface: &str, lower: &str) -> Option<&'static str> {
    if surface == "US" {
        return None;
    }
    let numeric = surface.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',');
    if numeric && surface.chars().any(|c| c.is_ascii_digit()) {
        return Some("CD");
    }
    closed_class(lower).or_else(|| modal_if_lowercase(surface))
}

fn normalize(word: &str) -> String {
    let first = word.chars().next();
    if word.contains('-') && first != Some('-') {
        "!HYPHEN".into()
    } else if word.len() == 4 && word.chars().all(|c| c.is_ascii_digit()) {
        "!YEAR".into()
    } else if first.is_some_and(|c| c.is_ascii_digit()) {
        "!DIGITS".into()
    } else {
        word.to_lowercase()
    }
}

fn suffix(s: &str, n: usize) -> &str {
    let k = s.char_indices().rev().nth(n - 1).map_or(0, |(b, _)| b);
    &s[k..]
}

fn shape(word: &str) -> &'static str {
    let mut chars = word.chars();
    let first = chars.next();
    let upper = word.chars().filter(|c| c.is_uppercase()).count();
    let letters = word.chars().filter(|c| c.is_alphabetic()).count();
    match first {
        Some(c) if c.is_ascii_digit() => "d",
        Some(c) if c.is_uppercase() && upper == letters && letters > 1 => "XX",
        Some(c) if c.is_uppercase() => "Xx",
        Some(c) if c.is_alphabetic() => {
            if upper > 0 {
                "xX"
            } else {
                "x"
            }
        }
        _ => "p",
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tagger {
    model: Perceptron,
    tagdict: HashMap<String, u16>,
    /// Most frequent Penn tag per word form, from an external lexicon.
    lexicon: HashMap<String, String>,
}

impl Tagger {
    /// The model compiled into the library.
    pub fn builtin() -> Result<&'static Tagger> {
        static TAGGER: OnceLock<std::result::Result<Tagger, String>> = OnceLock::new();
        TAGGER
            .get_or_init(|| Tagger::from_bytes(BUILTIN_MODEL).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Config(e.clone()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Tagger> {
        let path = path.as_ref();
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Config(format!("cannot read tagger model {}: {e}", path.display())))?;
        Tagger::from_bytes(&bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn classes(&self) -> &[String] {
        &self.model.classes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Tagger> {
        let mut r = ModelReader::open(bytes)?;
        let n = r.u32()? as usize;
        let classes = (0..n).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
        let check = |c: u16| -> Result<u16> {
            if (c as usize) < classes.len() {
                Ok(c)
            } else {
                Err(Error::Config(format!("tagger model: class index {c} out of range")))
            }
        };
        let n = r.u32()? as usize;
        let mut tagdict = HashMap::with_capacity(n);
        for _ in 0..n {
            let w = r.str()?;
            tagdict.insert(w, check(r.u16()?)?);
        }
        let n = r.u32()? as usize;
        let mut lexicon = HashMap::with_capacity(n);
        for _ in 0..n {
            let w = r.str()?;
            lexicon.insert(w, r.str()?);
        }
        let n = r.u32()? as usize;
        let mut weights = HashMap::with_capacity(n);
        for _ in 0..n {
            let f = r.str()?;
            let k = r.u16()? as usize;
            let mut row = Vec::with_capacity(k);
            for _ in 0..k {
                row.push((check(r.u16()?)?, r.f32()?));
            }
            weights.insert(f, row);
        }
        if !r.at_end() {
            return Err(Error::Config("tagger model: trailing bytes".into()));
        }
        Ok(Tagger {
            model: Perceptron { classes, weights },
            tagdict,
            lexicon,
        })
    }

    /// Serialize with every section in sorted order so output is reproducible.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ModelWriter::default();
        w.u32(self.model.classes.len() as u32);
        for c in &self.model.classes {
            w.str(c);
        }
        let tagdict: BTreeMap<_, _> = self.tagdict.iter().collect();
        w.u32(tagdict.len() as u32);
        for (word, c) in tagdict {
            w.str(word);
            w.u16(*c);
        }
        let lexicon: BTreeMap<_, _> = self.lexicon.iter().collect();
        w.u32(lexicon.len() as u32);
        for (word, t) in lexicon {
            w.str(word);
            w.str(t);
        }
        let weights: BTreeMap<_, _> = self.model.weights.iter().collect();
        w.u32(weights.len() as u32);
        for (f, row) in weights {
            w.str(f);
            w.u16(row.len() as u16);
            for (c, x) in row {
                w.u16(*c);
                w.f32(*x);
            }
        }
        w.finish()
    }

    fn lex(&self, word: &str) -> &str {
        self.lexicon
            .get(word)
            .or_else(|| self.lexicon.get(&word.to_lowercase()))
            .map_or("?", String::as_str)
    }

    fn features(&self, i: usize, words: &[&str], context: &[String], prev: &str, prev2: &str) -> Vec<String> {
        let word = words[i];
        let c = i + START.len();
        let w = &context[c];
        let next_raw = words.get(i + 1).copied().unwrap_or(END[0]);
        vec![
            "bias".to_string(),
            format!("i suffix {}", suffix(w, 3)),
            format!("i suffix2 {}", suffix(w, 2)),
            format!("i pref1 {}", w.chars().next().unwrap_or(' ')),
            format!("i-1 tag {prev}"),
            format!("i-2 tag {prev2}"),
            format!("i tag+i-2 tag {prev} {prev2}"),
            format!("i word {w}"),
            format!("i-1 tag+i word {prev} {w}"),
            format!("i-1 word {}", context[c - 1]),
            format!("i-1 suffix {}", suffix(&context[c - 1], 3)),
            format!("i-2 word {}", context[c - 2]),
            format!("i+1 word {}", context[c + 1]),
            format!("i+1 suffix {}", suffix(&context[c + 1], 3)),
            format!("i+2 word {}", context[c + 2]),
            format!("i shape {} {}", shape(word), i == 0),
            format!("i lex {}", self.lex(word)),
            format!("i-1 tag+i lex {prev} {}", self.lex(word)),
            format!("i+1 lex {}", self.lex(next_raw)),
        ]
    }

    fn context(words: &[&str]) -> Vec<String> {
        START
            .iter()
            .map(|s| s.to_string())
            .chain(words.iter().map(|w| normalize(w)))
            .chain(END.iter().map(|s| s.to_string()))
            .collect()
    }

    /// Penn tags for one sentence of surface forms.
    pub fn tag_words(&self, words: &[&str]) -> Vec<String> {
        let context = Tagger::context(words);
        let mut out: Vec<String> = Vec::with_capacity(words.len());
        let (mut prev, mut prev2) = (START[0].to_string(), START[1].to_string());
        for (i, word) in words.iter().enumerate() {
            let lower = word.to_lowercase().replace('\u{2019}', "'");
            let tag = if !word.chars().any(char::is_alphanumeric) {
                punct_tag(word).to_string()
            } else if let Some(t) = forced(word, &lower) {
                t.to_string()
            } else if let Some(&c) = self.tagdict.get(*word) {
                self.model.classes[c as usize].clone()
            } else if self.model.classes.is_empty() {
                "NN".to_string()
            } else {
                let feats = self.features(i, words, &context, &prev, &prev2);
                let c = self.model.predict(feats.iter().map(String::as_str));
                self.model.classes[c as usize].clone()
            };
            prev2 = std::mem::replace(&mut prev, tag.clone());
            out.push(tag);
        }
        out
    }

    /// Train on gold/silver sentences of (word, Penn tag).
    pub fn train(
        sentences: &[Vec<(String, String)>],
        lexicon: HashMap<String, String>,
        iterations: usize,
        seed: u64,
    ) -> Result<Tagger> {
        if sentences.is_empty() {
            return Err(Error::Training("no training sentences".into()));
        }
        let mut counts: HashMap<&str, HashMap<&str, usize>> = HashMap::new();
        let mut class_set: Vec<String> = Vec::new();
        for s in sentences {
            for (w, t) in s {
                *counts.entry(w).or_default().entry(t).or_default() += 1;
                if !class_set.contains(t) {
                    class_set.push(t.clone());
                }
            }
        }
        class_set.sort();
        let class_index: HashMap<String, u16> =
            class_set.iter().enumerate().map(|(i, c)| (c.clone(), i as u16)).collect();
        let mut tagdict = HashMap::new();
        for (w, tags) in &counts {
            let n: usize = tags.values().sum();
            let (best, k) = tags.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))).unwrap();
            if n >= TAGDICT_MIN_COUNT && *k as f64 / n as f64 >= TAGDICT_MIN_SHARE {
                tagdict.insert(w.to_string(), class_index[*best]);
            }
        }

        let mut tagger = Tagger {
            model: Perceptron {
                classes: class_set.clone(),
                weights: HashMap::new(),
            },
            tagdict,
            lexicon,
        };
        let mut trainer = Trainer::new(class_set);
        let mut order: Vec<usize> = (0..sentences.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..iterations {
            for &si in &order {
                let sent = &sentences[si];
                let words: Vec<&str> = sent.iter().map(|(w, _)| w.as_str()).collect();
                let context = Tagger::context(&words);
                let (mut prev, mut prev2) = (START[0].to_string(), START[1].to_string());
                for (i, (word, truth)) in sent.iter().enumerate() {
                    let lower = word.to_lowercase().replace('\u{2019}', "'");
                    let guess = if !word.chars().any(char::is_alphanumeric) {
                        punct_tag(word).to_string()
                    } else if let Some(t) = forced(word, &lower) {
                        t.to_string()
                    } else if let Some(&c) = tagger.tagdict.get(word) {
                        tagger.model.classes[c as usize].clone()
                    } else {
                        let feats = tagger.features(i, &words, &context, &prev, &prev2);
                        let g = trainer.predict(&feats);
                        trainer.update(class_index[truth], g, &feats);
                        tagger.model.classes[g as usize].clone()
                    };
                    prev2 = std::mem::replace(&mut prev, guess);
                }
            }
            order.shuffle(&mut rng);
        }
        tagger.model = trainer.finish();
        Ok(tagger)
    }

    /// Token-level accuracy against reference sentences.
    pub fn evaluate(&self, sentences: &[Vec<(String, String)>]) -> f64 {
        let (mut right, mut total) = (0usize, 0usize);
        for s in sentences {
            let words: Vec<&str> = s.iter().map(|(w, _)| w.as_str()).collect();
            for (guess, (_, truth)) in self.tag_words(&words).iter().zip(s) {
                right += (guess == truth) as usize;
                total += 1;
            }
        }
        if total == 0 {
            0.0
        } else {
            right as f64 / total as f64
        }
    }
}

fn punct_tag(word: &str) -> &'static str {
    match word {
        "." | "!" | "?" | "..." => ".",
        "," => ",",
        ":" | ";" | "-" | "--" => ":",
        "(" | "[" | "{" => "(",
        ")" | "]" | "}" => ")",
        "\"" | "'" | "\u{201C}" | "\u{201D}" => "''",
        "$" => "$",
        "#" => "#",
        _ if word.chars().all(|c| c == '.') => ".",
        _ => "SYM",
    }
}

/// Read a "word TAG ..." lexicon (first tag wins); `;` lines are comments.
pub fn read_brill_lexicon(path: impl AsRef<Path>) -> Result<HashMap<String, String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = HashMap::new();
    for line in text.lines() {
        if line.starts_with(';') {
            continue;
        }
        let mut it = line.split_whitespace();
        if let (Some(w), Some(t)) = (it.next(), it.next()) {
            out.entry(w.to_string()).or_insert_with(|| t.to_string());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Vec<Vec<(String, String)>> {
        let raw = [
            "The/DT dog/NN runs/VBZ ./.",
            "A/DT cat/NN sleeps/VBZ ./.",
            "The/DT cats/NNS sleep/VBP quickly/RB ./.",
            "Dogs/NNS bark/VBP loudly/RB ./.",
        ];
        raw.iter()
            .map(|s| {
                s.split(' ')
                    .map(|p| {
                        let (w, t) = p.rsplit_once('/').unwrap();
                        (w.to_string(), t.to_string())
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn trains_and_round_trips() {
        let data = toy();
        let t = Tagger::train(&data, HashMap::new(), 8, 1).unwrap();
        assert!(t.evaluate(&data) > 0.9);
        let bytes = t.to_bytes();
        assert_eq!(&bytes[..5], b"STXP1");
        let back = Tagger::from_bytes(&bytes).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_bytes(), bytes);
        let again = Tagger::train(&data, HashMap::new(), 8, 1).unwrap();
        assert_eq!(again.to_bytes(), bytes);
    }

    #[test]
    fn missing_model_is_config_error() {
        assert!(matches!(Tagger::load("/nonexistent/tagger.stxp"), Err(Error::Config(_))));
    }

    #[test]
    fn closed_class_wins() {
        let t = Tagger::default();
        assert_eq!(t.tag_words(&["the", "We", "not", "."]), ["DT", "PRP", "RB", "."]);
    }
}
