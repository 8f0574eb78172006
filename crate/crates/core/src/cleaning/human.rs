use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;

use super::{char_delta, to_fixpoint, CleaningConfig, CleaningReport, CleaningRule, RuleKind};
use crate::corpus::{Label, TextRecord};

const R_PUNCT: &str = "normalize_punctuation";
const R_WS: &str = "collapse_whitespace";
const R_URL: &str = "strip_urls_emails_emoji";
const R_DATE: &str = "strip_datelines";
const R_DEDUP: &str = "dedup";
const R_LANG: &str = "non_english";
const R_MINLEN: &str = "min_length";

pub fn human_rules() -> Vec<CleaningRule> {
    vec![
        CleaningRule {
            name: R_PUNCT,
            kind: RuleKind::TransformText,
            description: "curly quotes to straight, dashes to '-', ellipsis to '...' (shipped table)",
        },
        CleaningRule {
            name: R_WS,
            kind: RuleKind::TransformText,
            description: "collapse whitespace runs to one space",
        },
        CleaningRule {
            name: R_URL,
            kind: RuleKind::TransformText,
            description: "remove URLs, e-mail addresses and emoji",
        },
        CleaningRule {
            name: R_DATE,
            kind: RuleKind::TransformText,
            description: "remove leading dateline artifacts",
        },
        CleaningRule {
            name: R_DEDUP,
            kind: RuleKind::DropRecord,
            description: "drop exact duplicates of an earlier cleaned text",
        },
        CleaningRule {
            name: R_LANG,
            kind: RuleKind::DropRecord,
            description: "drop texts failing the Latin-script and stopword checks",
        },
        CleaningRule {
            name: R_MINLEN,
            kind: RuleKind::DropRecord,
            description: "drop texts shorter than the dataset minimum",
        },
    ]
}

fn url_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?i)\b(?:https?://|ftp://|www\.)[^\s<>]*[^\s<>.,;:!?'\x22)\]]|\b[a-z0-9._%+-]+@[a-z0-9.-]+\.[a-z]{2,}\b",
        )
        .unwrap()
    })
}

fn emoji_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            "[\u{1F000}-\u{1FAFF}\u{2600}-\u{27BF}\u{2B00}-\u{2BFF}\u{1F1E6}-\u{1F1FF}\u{FE0E}\u{FE0F}\u{200D}\u{20E3}\u{E0020}-\u{E007F}]",
        )
        .unwrap()
    })
}

fn dateline_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let month = r"(?:Jan(?:uary)?|Feb(?:ruary)?|Mar(?:ch)?|Apr(?:il)?|May|June?|July?|Aug(?:ust)?|Sep(?:t(?:ember)?)?|Oct(?:ober)?|Nov(?:ember)?|Dec(?:ember)?)\.?";
        let date = format!(
            r"(?:{month}\s+\d{{1,2}}(?:st|nd|rd|th)?,?\s+\d{{4}}|\d{{1,2}}\s+{month}\s+\d{{4}}|\d{{4}}-\d{{2}}-\d{{2}}|\d{{1,2}}/\d{{1,2}}/\d{{2,4}})"
        );
        // CITY (Agency) -   |   CITY, Month 5, 2020 -   |   Month 5, 2020 -   |   Published: date
        let pattern = format!(
            r"^(?:(?:Published|Posted|Updated|Date)\s*:\s*{date}\s*[-|:]?\s*|[A-Z][A-Z.'-]+(?:[ ,]+[A-Z][A-Z.'-]+)*(?:,\s*{date})?\s*(?:\([A-Za-z .&]+\))?\s+-\s+|{date}\s*(?:\([A-Za-z .&]+\))?\s*[-:|]\s+)"
        );
        Regex::new(&pattern).unwrap()
    })
}

/// Replace characters according to the punctuation table.
pub fn normalize_punctuation(text: &str, table: &[(char, String)]) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match table.iter().find(|(k, _)| *k == c) {
            Some((_, r)) => out.push_str(r),
            None => out.push(c),
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn strip_urls_emails_emoji(text: &str) -> String {
    let t = url_re().replace_all(text, "");
    let t = emoji_re().replace_all(&t, "");
    collapse_whitespace(&t)
}

fn strip_datelines(text: &str) -> String {
    dateline_re().replace(text, "").trim_start().to_string()
}

fn is_latin_letter(c: char) -> bool {
    c.is_ascii_alphabetic() || (('\u{C0}'..='\u{FF}').contains(&c) && c != '\u{D7}' && c != '\u{F7}')
}

/// Latin-script share of letters and stopword density check.
pub fn is_english(text: &str, cfg: &CleaningConfig) -> bool {
    let letters = text.chars().filter(|c| c.is_alphabetic()).count();
    if letters == 0 {
        return false;
    }
    let latin = text.chars().filter(|c| is_latin_letter(*c)).count();
    if (latin as f64) < cfg.min_latin_ratio * letters as f64 {
        return false;
    }
    let words: Vec<String> = text
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect();
    let hits = words.iter().filter(|w| cfg.stopwords.contains(w.as_str())).count();
    hits >= cfg.stopwords_per_50 * words.len() / 50
}

type Step = fn(&str, &CleaningConfig) -> String;

fn transforms() -> [(&'static str, Step); 4] {
    [
        (R_PUNCT, |t, c| normalize_punctuation(t, &c.punctuation)),
        (R_WS, |t, _| collapse_whitespace(t)),
        (R_URL, |t, _| strip_urls_emails_emoji(t)),
        (R_DATE, |t, _| strip_datelines(t)),
    ]
}

fn transform(text: &str, cfg: &CleaningConfig) -> (String, [i64; 4]) {
    let mut removed = [0i64; 4];
    let out = to_fixpoint(text.to_string(), |t| {
        let mut cur = t.to_string();
        for (i, (_, step)) in transforms().iter().enumerate() {
            let next = step(&cur, cfg);
            removed[i] += char_delta(&cur, &next);
            cur = next;
        }
        cur
    });
    (out, removed)
}

/// Run the human pipeline. Records must be labeled human.
pub fn clean_human(records: &[TextRecord], cfg: &CleaningConfig) -> (Vec<TextRecord>, CleaningReport) {
    let rules = human_rules();
    let mut report = CleaningReport::for_rules(&rules);
    report.input_records = records.len();
    report.input_chars = records.iter().map(|r| r.char_len).sum();

    let transformed: Vec<(String, [i64; 4])> =
        records.par_iter().map(|r| transform(&r.text, cfg)).collect();

    let mut seen: HashSet<&str> = HashSet::new();
    let mut out = Vec::with_capacity(records.len());
    for (rec, (text, removed)) in records.iter().zip(&transformed) {
        debug_assert_eq!(rec.label, Label::Human);
        for ((name, _), n) in transforms().iter().zip(removed) {
            report.counter_mut(name).chars_removed += n;
        }
        let len = text.chars().count();
        let drop = if !seen.insert(text.as_str()) {
            Some(R_DEDUP)
        } else if !is_english(text, cfg) {
            Some(R_LANG)
        } else if cfg.min_length.get(&rec.dataset).is_some_and(|&m| len < m) {
            Some(R_MINLEN)
        } else {
            None
        };
        match drop {
            Some(rule) => {
                let c = report.counter_mut(rule);
                c.records_dropped += 1;
                c.chars_removed += len as i64;
            }
            None => {
                let mut r = rec.clone();
                r.set_text(text.clone());
                out.push(r);
            }
        }
    }
    report.output_records = out.len();
    report.output_chars = out.iter().map(|r| r.char_len).sum();
    (out, report)
}
