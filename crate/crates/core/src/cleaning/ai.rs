use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;

use super::{char_delta, to_fixpoint, CleaningConfig, CleaningReport, CleaningRule, RuleKind};
use crate::corpus::{Label, TextRecord};

const R_THINK: &str = "think_tags";
const R_OPENER: &str = "openers";
const R_LINES: &str = "headings_and_bullets";
const R_PLACEHOLDER: &str = "placeholders";
const R_META: &str = "rating_and_length_metadata";
const R_NOTE: &str = "note_sentences";
const R_SYMBOLS: &str = "symbols";
const R_WS: &str = "whitespace";
const R_EMPTY: &str = "empty";

const TRANSFORMS: [&str; 8] = [R_THINK, R_OPENER, R_LINES, R_PLACEHOLDER, R_META, R_NOTE, R_SYMBOLS, R_WS];

pub fn ai_rules() -> Vec<CleaningRule> {
    vec![
        CleaningRule {
            name: R_THINK,
            kind: RuleKind::TransformText,
            description: "remove reasoning tags and everything before the closing tag",
        },
        CleaningRule {
            name: R_OPENER,
            kind: RuleKind::TransformText,
            description: "remove formulaic openers from the configurable lexicon",
        },
        CleaningRule {
            name: R_LINES,
            kind: RuleKind::TransformText,
            description: "strip bullet/number/heading markers; drop bare heading lines",
        },
        CleaningRule {
            name: R_PLACEHOLDER,
            kind: RuleKind::TransformText,
            description: "remove [bracketed placeholders]",
        },
        CleaningRule {
            name: R_META,
            kind: RuleKind::TransformText,
            description: "remove rating and character/word-count annotations",
        },
        CleaningRule {
            name: R_NOTE,
            kind: RuleKind::TransformText,
            description: "remove sentences starting with 'Note:'",
        },
        CleaningRule {
            name: R_SYMBOLS,
            kind: RuleKind::TransformText,
            description: "remove '*', '#' and runs of three or more '-'",
        },
        CleaningRule {
            name: R_WS,
            kind: RuleKind::TransformText,
            description: "collapse spaces, trim lines, limit blank lines",
        },
        CleaningRule {
            name: R_EMPTY,
            kind: RuleKind::DropRecord,
            description: "drop records emptied by cleaning",
        },
    ]
}

fn strip_think(text: &str) -> String {
    let lower = text.to_ascii_lowercase();
    if let Some(pos) = lower.rfind("</think>") {
        return text[pos + "</think>".len()..].to_string();
    }
    match lower.find("<think>") {
        Some(pos) => format!("{}{}", &text[..pos], &text[pos + "<think>".len()..]),
        None => text.to_string(),
    }
}

fn strip_openers(text: &str, openers: &[String]) -> String {
    let mut t = text.trim_start();
    'outer: loop {
        for o in openers {
            let n = o.len();
            if t.len() >= n && t.is_char_boundary(n) && t[..n].eq_ignore_ascii_case(o) {
                let rest = &t[n..];
                if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                    t = rest.trim_start();
                    continue 'outer;
                }
            }
        }
        break;
    }
    t.to_string()
}

fn marker_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*(?:#{1,6}\s*|[-\u{2022}*+]\s+|\(?\d{1,3}[.)]\s+)").unwrap())
}

fn bold_line_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*\*\*[^*\n]+\*\*:?\s*$").unwrap())
}

fn is_bare_heading(line: &str) -> bool {
    let t = line.trim().trim_matches('*').trim();
    let tokens = t.split_whitespace().count();
    tokens < 6 && !t.ends_with(['.', '!', '?', '"', '\''])
}

fn strip_line_markers(text: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    for line in text.lines() {
        let mut cur = line.to_string();
        let mut marked = bold_line_re().is_match(&cur);
        loop {
            let next = marker_re().replace(&cur, "").into_owned();
            if next == cur {
                break;
            }
            marked = true;
            cur = next;
        }
        if marked && is_bare_heading(&cur) {
            continue;
        }
        out.push(cur);
    }
    out.join("\n")
}

fn placeholder_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\[[^\[\]\n]{0,80}[A-Za-z][^\[\]\n]{0,80}\]").unwrap())
}

// "again, [name]." leaves "again, ." behind
fn dangling_punct_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[,;:][ \t]*([.!?])").unwrap())
}

fn meta_res() -> &'static [Regex] {
    static RE: OnceLock<Vec<Regex>> = OnceLock::new();
    RE.get_or_init(|| {
        [
            // whole-line labels: "Rating: 4/5", "Character count: 1,037"
            r"(?im)^[ \t]*(?:overall\s+)?(?:rating|stars|score|(?:character|char|word)\s+count|(?:review\s+)?length(?:\s+in\s+characters)?|characters)[ \t]*:[ \t]*[~\u{2248}]?[ \t]*[\d\u{2605}\u{2606}\u{2B50}][^\n]{0,60}$",
            // parenthesised counts: "(1037 characters)", "(Character count: 1037)"
            r"(?i)\(\s*(?:(?:approx(?:imately|\.)?|about|around|~)\s*)?\d[\d,]*\s*(?:characters|chars|words)\s*\)",
            r"(?i)\(\s*(?:character|char|word)\s+count\s*:?\s*[~\u{2248}]?\s*\d[\d,]*[^()\n]{0,20}\)",
            // inline ratings: "Rating: 4/5 stars"
            r"(?i)\b(?:character|char|word)\s+count\s*:\s*[~\u{2248}]?\s*\d[\d,]*(?:\s*(?:characters|chars|words))?\.?",
            r"(?i)\brating\s*:\s*\d(?:\.\d)?\s*(?:/\s*\d+|out\s+of\s+\d+)?(?:\s*stars?)?\.?",
            r"(?i)\b\d(?:\.\d)?\s*/\s*5\s+stars?\b\.?",
        ]
        .iter()
        .map(|p| Regex::new(p).unwrap())
        .collect()
    })
}

fn strip_meta(text: &str) -> String {
    let mut t = text.to_string();
    for re in meta_res() {
        t = re.replace_all(&t, "").into_owned();
    }
    t
}

/// Remove every "Note:" sentence that starts at the beginning of the text,
/// a line, or a sentence. The sentence runs to the next terminal
/// punctuation followed by whitespace, a newline, or the end.
fn strip_notes(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        if is_note_at(text, i) {
            let mut j = i + 5;
            let mut end = text.len();
            while j < text.len() {
                let b = bytes[j];
                if b == b'\n' {
                    end = j;
                    break;
                }
                if matches!(b, b'.' | b'!' | b'?') {
                    let mut k = j;
                    while k < text.len() && matches!(bytes[k], b'.' | b'!' | b'?') {
                        k += 1;
                    }
                    if k == text.len() || bytes[k].is_ascii_whitespace() {
                        end = k;
                        break;
                    }
                    j = k;
                    continue;
                }
                j += 1;
            }
            i = end;
            continue;
        }
        let c = text[i..].chars().next().unwrap();
        out.push(c);
        i += c.len_utf8();
    }
    out
}

fn is_note_at(text: &str, i: usize) -> bool {
    let rest = &text[i..];
    if rest.len() < 5 || !rest.is_char_boundary(5) || !rest[..5].eq_ignore_ascii_case("note:") {
        return false;
    }
    let before = text[..i].trim_end_matches([' ', '\t', '(', '*', '_']);
    before.is_empty() || before.ends_with(['.', '!', '?', '\n', ':']) || text[..i].ends_with('\n')
}

fn dash_run_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"-{3,}").unwrap())
}

fn strip_symbols(text: &str) -> String {
    let t: String = text.chars().filter(|c| *c != '*' && *c != '#').collect();
    dash_run_re().replace_all(&t, "").into_owned()
}

fn renormalize_whitespace(text: &str) -> String {
    let mut lines: Vec<String> = Vec::new();
    let mut blank = 0;
    for line in text.lines() {
        let l = line.split_whitespace().collect::<Vec<_>>().join(" ");
        // drop leftovers such as a lone "()" or ":" after metadata removal
        let l = if l.chars().all(|c| matches!(c, '(' | ')' | ':' | '-' | '|' | ',')) {
            String::new()
        } else {
            l
        };
        if l.is_empty() {
            blank += 1;
            if blank == 1 && !lines.is_empty() {
                lines.push(String::new());
            }
        } else {
            blank = 0;
            lines.push(l);
        }
    }
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    let joined = lines.join("\n");
    tidy_spacing(&joined)
}

/// Space before sentence punctuation left behind by removals.
fn tidy_spacing(text: &str) -> String {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r" +([.,!?;:])").unwrap());
    re.replace_all(text, "$1").into_owned()
}

fn apply(name: &str, text: &str, cfg: &CleaningConfig) -> String {
    match name {
        R_THINK => strip_think(text),
        R_OPENER => strip_openers(text, &cfg.openers),
        R_LINES => strip_line_markers(text),
        R_PLACEHOLDER => {
            let t = placeholder_re().replace_all(text, "");
            dangling_punct_re().replace_all(&t, "$1").into_owned()
        }
        R_META => strip_meta(text),
        R_NOTE => strip_notes(text),
        R_SYMBOLS => strip_symbols(text),
        R_WS => renormalize_whitespace(text),
        _ => unreachable!("unknown rule {name}"),
    }
}

fn transform(text: &str, cfg: &CleaningConfig) -> (String, [i64; 8]) {
    let mut removed = [0i64; 8];
    let out = to_fixpoint(text.to_string(), |t| {
        let mut cur = t.to_string();
        for (i, name) in TRANSFORMS.iter().enumerate() {
            let next = apply(name, &cur, cfg);
            removed[i] += char_delta(&cur, &next);
            cur = next;
        }
        cur
    });
    (out, removed)
}

/// Clean one AI text; `None` when nothing is left.
pub fn clean_ai_text(text: &str, cfg: &CleaningConfig) -> Option<String> {
    let (t, _) = transform(text, cfg);
    (!t.is_empty()).then_some(t)
}

/// Run the AI pipeline. Records must be labeled ai; pairing metadata is
/// carried over unchanged.
pub fn clean_ai(records: &[TextRecord], cfg: &CleaningConfig) -> (Vec<TextRecord>, CleaningReport) {
    let rules = ai_rules();
    let mut report = CleaningReport::for_rules(&rules);
    report.input_records = records.len();
    report.input_chars = records.iter().map(|r| r.char_len).sum();

    let transformed: Vec<(String, [i64; 8])> = records.par_iter().map(|r| transform(&r.text, cfg)).collect();
    let mut out = Vec::with_capacity(records.len());
    for (rec, (text, removed)) in records.iter().zip(transformed) {
        debug_assert_eq!(rec.label, Label::Ai);
        for (name, n) in TRANSFORMS.iter().zip(removed) {
            report.counter_mut(name).chars_removed += n;
        }
        if text.is_empty() {
            report.counter_mut(R_EMPTY).records_dropped += 1;
            continue;
        }
        let mut r = rec.clone();
        r.set_text(text);
        out.push(r);
    }
    report.output_records = out.len();
    report.output_chars = out.iter().map(|r| r.char_len).sum();
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{GenerationConfig, PromptStrategy};

    fn clean(text: &str) -> String {
        clean_ai_text(text, &CleaningConfig::default()).unwrap_or_default()
    }

    #[test]
    fn opener_and_note() {
        assert_eq!(
            clean("Sure! Here is the review. Works great. Note: generated at 859 chars."),
            "Here is the review. Works great."
        );
    }

    #[test]
    fn think_block_and_preamble() {
        assert_eq!(clean("<think>...</think>\nFinal text."), "Final text.");
        assert_eq!(clean("Okay let me plan.\n<think>steps</think>Final text."), "Final text.");
    }

    #[test]
    fn clean_text_untouched() {
        let t = "The battery lasts two days. I would buy it again.";
        let (out, rep) = clean_ai(&[rec(t)], &CleaningConfig::default());
        assert_eq!(out[0].text, t);
        assert!(rep.is_noop());
    }

    #[test]
    fn bullets_headings_and_symbols() {
        let t = "## Summary\n- **Battery** lasts long.\n1. Screen is bright.\n---\nOverall a good buy.";
        // the rule line leaves a paragraph break
        assert_eq!(clean(t), "Battery lasts long.\nScreen is bright.\n\nOverall a good buy.");
    }

    #[test]
    fn bold_title_line_dropped() {
        assert_eq!(clean("**A New Approach**\n\nWe study the problem."), "We study the problem.");
    }

    #[test]
    fn placeholders_and_metadata() {
        assert_eq!(
            clean("Dear [Your Name], the order arrived. (1037 characters)\nRating: 4/5"),
            "Dear, the order arrived."
        );
        assert_eq!(clean("Thanks again, [Customer Name]."), "Thanks again.");
        assert_eq!(clean("Great fit. Character count: 412"), "Great fit.");
        assert_eq!(clean("Great fit.\nCharacter count: 412"), "Great fit.");
    }

    #[test]
    fn note_inside_paragraph() {
        assert_eq!(
            clean("It was fine. Note: this is fictional. The end."),
            "It was fine. The end."
        );
        assert_eq!(clean("Text here.\n\n*Note: word count is approximate*"), "Text here.");
    }

    #[test]
    fn emptied_record_dropped() {
        let (out, rep) = clean_ai(&[rec("Sure!")], &CleaningConfig::default());
        assert!(out.is_empty());
        assert_eq!(rep.counter(R_EMPTY).unwrap().records_dropped, 1);
    }

    #[test]
    fn pairing_preserved() {
        let (out, _) = clean_ai(&[rec("Certainly! Fine.")], &CleaningConfig::default());
        assert_eq!(out[0].pair_id.as_deref(), Some("h1"));
        assert_eq!(out[0].char_len, 5);
    }

    fn rec(text: &str) -> TextRecord {
        let cfg = GenerationConfig::new(PromptStrategy::ZeroShot, "m", "reviews");
        TextRecord::ai("a1", &cfg, "h1", text)
    }
}
