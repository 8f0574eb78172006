//! Ordered cleaning pipelines for human seed texts and AI generations.

mod ai;
mod human;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ai::clean_ai_text;
pub use human::{is_english, normalize_punctuation};

const PUNCTUATION_TABLE: &str = include_str!("../../data/punctuation.tsv");
const OPENERS: &str = include_str!("../../data/openers.txt");
const STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Transform rules are re-applied until the text stops changing; this bounds
/// the number of passes.
const MAX_PASSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    DropRecord,
    TransformText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningRule {
    pub name: &'static str,
    pub kind: RuleKind,
    pub description: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCounter {
    pub rule: String,
    pub kind: Option<RuleKind>,
    pub records_dropped: usize,
    /// Signed: normalization can lengthen a text ("…" -> "...").
    pub chars_removed: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub input_records: usize,
    pub output_records: usize,
    pub input_chars: usize,
    pub output_chars: usize,
    pub rules: Vec<RuleCounter>,
}

impl CleaningReport {
    fn for_rules(rules: &[CleaningRule]) -> Self {
        CleaningReport {
            rules: rules
                .iter()
                .map(|r| RuleCounter {
                    rule: r.name.to_string(),
                    kind: Some(r.kind),
                    ..Default::default()
                })
                .collect(),
            ..Default::default()
        }
    }

    pub fn counter(&self, rule: &str) -> Option<&RuleCounter> {
        self.rules.iter().find(|c| c.rule == rule)
    }

    fn counter_mut(&mut self, rule: &str) -> &mut RuleCounter {
        let i = self
            .rules
            .iter()
            .position(|c| c.rule == rule)
            .unwrap_or_else(|| panic!("rule {rule} not registered"));
        &mut self.rules[i]
    }

    pub fn total_dropped(&self) -> usize {
        self.rules.iter().map(|c| c.records_dropped).sum()
    }

    pub fn total_chars_removed(&self) -> i64 {
        self.rules.iter().map(|c| c.chars_removed).sum()
    }

    /// True when nothing was dropped or edited.
    pub fn is_noop(&self) -> bool {
        self.rules.iter().all(|c| c.records_dropped == 0 && c.chars_removed == 0)
    }

    /// Merge another report over the same rule list.
    pub fn merge(&mut self, other: &CleaningReport) {
        self.input_records += other.input_records;
        self.output_records += other.output_records;
        self.input_chars += other.input_chars;
        self.output_chars += other.output_chars;
        for c in &other.rules {
            match self.rules.iter_mut().find(|x| x.rule == c.rule) {
                Some(x) => {
                    x.records_dropped += c.records_dropped;
                    x.chars_removed += c.chars_removed;
                }
                None => self.rules.push(c.clone()),
            }
        }
    }
}

/// Lexicons and thresholds shared by both pipelines.
#[derive(Debug, Clone)]
pub struct CleaningConfig {
    pub punctuation: Vec<(char, String)>,
    pub openers: Vec<String>,
    pub stopwords: HashSet<String>,
    /// Minimum characters per dataset; datasets absent here are not filtered.
    pub min_length: BTreeMap<String, usize>,
    pub min_latin_ratio: f64,
    /// Required stopword hits per 50 tokens.
    pub stopwords_per_50: usize,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig {
            punctuation: parse_punctuation_table(PUNCTUATION_TABLE).expect("shipped punctuation table"),
            openers: parse_lines(OPENERS),
            stopwords: parse_lines(STOPWORDS).into_iter().map(|s| s.to_lowercase()).collect(),
            min_length: [("abstracts", 1000), ("news", 1000), ("reviews", 350)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            min_latin_ratio: 0.9,
            stopwords_per_50: 2,
        }
    }
}

impl CleaningConfig {
    pub fn with_openers_file(mut self, path: impl AsRef<Path>) -> Result<Self> {
        self.openers = read_lexicon(path)?;
        Ok(self)
    }

    pub fn with_stopwords_file(mut self, path: impl AsRef<Path>) -> Result<Self> {
        self.stopwords = read_lexicon(path)?.into_iter().map(|s| s.to_lowercase()).collect();
        Ok(self)
    }

    pub fn with_punctuation_file(mut self, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.punctuation = parse_punctuation_table(&text)?;
        Ok(self)
    }
}

/// One entry per line; blank lines and `#` comments ignored.
pub fn read_lexicon(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_lines(&text))
}

/// Non-empty, non-comment lines of a newline-delimited list.
pub fn parse_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn parse_punctuation_table(text: &str) -> Result<Vec<(char, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (cp, repl) = line.split_once('\t').unwrap_or((line, ""));
        let parse_err = || Error::Parse {
            line: i + 1,
            message: format!("bad code point {cp:?}"),
        };
        let hex = cp.trim().strip_prefix("U+").ok_or_else(parse_err)?;
        let c = u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(parse_err)?;
        out.push((c, repl.to_string()));
    }
    Ok(out)
}

/// Apply `f` until a fixed point, at most [`MAX_PASSES`] times.
fn to_fixpoint(mut text: String, mut f: impl FnMut(&str) -> String) -> String {
    for _ in 0..MAX_PASSES {
        let next = f(&text);
        if next == text {
            break;
        }
        text = next;
    }
    text
}

fn char_delta(before: &str, after: &str) -> i64 {
    before.chars().count() as i64 - after.chars().count() as i64
}

pub use ai::{clean_ai, ai_rules};
pub use human::{clean_human, human_rules};
