use std::collections::HashSet;
use std::ops::Range;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");
const CLITICS: [&str; 6] = ["'s", "'m", "'re", "'ve", "'ll", "'d"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    /// Byte offsets into the source text.
    pub span: (usize, usize),
    pub is_word: bool,
}

impl Token {
    fn new(text: &str, start: usize, end: usize) -> Token {
        let surface = text[start..end].to_string();
        Token {
            lower: surface.to_lowercase().replace('\u{2019}', "'"),
            is_word: surface.chars().any(char::is_alphanumeric),
            surface,
            span: (start, end),
        }
    }

    /// Token without a source text, e.g. from CoNLL-U; the span is synthetic.
    pub fn detached(surface: &str, start: usize) -> Token {
        Token {
            surface: surface.to_string(),
            lower: surface.to_lowercase().replace('\u{2019}', "'"),
            span: (start, start + surface.len()),
            is_word: surface.chars().any(char::is_alphanumeric),
        }
    }
}

pub fn default_abbreviations() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect()
    })
}

#[derive(Debug, Clone)]
pub struct Tokenizer {
    abbreviations: HashSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            abbreviations: default_abbreviations().clone(),
        }
    }
}

fn is_apos(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

impl Tokenizer {
    pub fn with_abbreviations(list: impl IntoIterator<Item = String>) -> Self {
        Tokenizer {
            abbreviations: list.into_iter().map(|s| s.to_lowercase()).collect(),
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let n = chars.len();
        let at = |k: usize| chars.get(k).map(|&(_, c)| c);
        let off = |k: usize| chars.get(k).map_or(text.len(), |&(b, _)| b);
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            let c = chars[i].1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_alphanumeric() {
                let mut j = i + 1;
                while j < n {
                    let d = chars[j].1;
                    let nxt = at(j + 1);
                    let prev = chars[j - 1].1;
                    let joins = d.is_alphanumeric()
                        || (is_apos(d) && nxt.is_some_and(char::is_alphabetic))
                        || (d == '-' && nxt.is_some_and(char::is_alphanumeric))
                        || ((d == '.' || d == ',') && prev.is_numeric() && nxt.is_some_and(char::is_numeric))
                        || (d == '.'
                            && nxt.is_some_and(char::is_alphabetic)
                            && prev.is_alphabetic()
                            && !at(j + 2).is_some_and(char::is_alphabetic));
                    if !joins {
                        break;
                    }
                    j += 1;
                }
                let word = &text[off(i)..off(j)];
                if at(j) == Some('.') {
                    let with_dot = format!("{}.", word.to_lowercase());
                    let last_digit = word.chars().last().is_some_and(char::is_numeric);
                    if self.abbreviations.contains(&with_dot) || (word.contains('.') && !last_digit) {
                        j += 1;
                    }
                }
                push_word(text, off(i), off(j), &mut out);
                i = j;
                continue;
            }
            if c == '.' {
                let mut j = i;
                while at(j) == Some('.') {
                    j += 1;
                }
                out.push(Token::new(text, off(i), off(j)));
                i = j;
                continue;
            }
            out.push(Token::new(text, off(i), off(i + 1)));
            i += 1;
        }
        out
    }

    /// Sentence ranges over token indices. Boundaries fall after runs of
    /// terminal punctuation (plus closing quotes/brackets) and at line
    /// breaks. Segments without word tokens are merged into a neighbour.
    pub fn split_sentences(&self, text: &str, tokens: &[Token]) -> Vec<Range<usize>> {
        split_sentences(text, tokens)
    }
}

fn push_word(text: &str, start: usize, end: usize, out: &mut Vec<Token>) {
    let word = &text[start..end];
    let low = word.to_lowercase().replace('\u{2019}', "'");
    let nchars = word.chars().count();
    let mut cut = None;
    if low.ends_with("n't") && nchars > 3 {
        cut = Some(3);
    } else {
        for cl in CLITICS {
            if low.ends_with(cl) && nchars > cl.chars().count() {
                cut = Some(cl.chars().count());
                break;
            }
        }
    }
    match cut {
        Some(k) => {
            let split = word.char_indices().rev().nth(k - 1).map(|(b, _)| b).unwrap();
            out.push(Token::new(text, start, start + split));
            out.push(Token::new(text, start + split, end));
        }
        None => out.push(Token::new(text, start, end)),
    }
}

fn is_terminal(t: &Token) -> bool {
    !t.surface.is_empty() && t.surface.chars().all(|c| matches!(c, '.' | '!' | '?'))
}

fn is_closer(t: &Token) -> bool {
    matches!(t.surface.as_str(), "\"" | "'" | ")" | "]" | "}" | "\u{201D}" | "\u{2019}")
}

pub fn split_sentences(text: &str, tokens: &[Token]) -> Vec<Range<usize>> {
    let mut raw: Vec<Range<usize>> = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        let mut end = None;
        if is_terminal(&tokens[i]) {
            let mut j = i + 1;
            while j < tokens.len() && (is_terminal(&tokens[j]) || is_closer(&tokens[j])) {
                j += 1;
            }
            end = Some(j);
        } else if i + 1 < tokens.len() {
            let gap = text.get(tokens[i].span.1..tokens[i + 1].span.0).unwrap_or("");
            if gap.contains('\n') {
                end = Some(i + 1);
            }
        }
        match end {
            Some(e) => {
                raw.push(start..e);
                start = e;
                i = e;
            }
            None => i += 1,
        }
    }
    if start < tokens.len() {
        raw.push(start..tokens.len());
    }
    // merge word-less segments
    let has_word = |r: &Range<usize>| tokens[r.clone()].iter().any(|t| t.is_word);
    let mut out: Vec<Range<usize>> = Vec::new();
    let mut pending: Option<usize> = None;
    for r in raw {
        if has_word(&r) {
            let s = pending.take().unwrap_or(r.start);
            out.push(s..r.end);
        } else if let Some(last) = out.last_mut() {
            last.end = r.end;
        } else {
            pending.get_or_insert(r.start);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        Tokenizer::default().tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    fn n_sentences(text: &str) -> usize {
        let tk = Tokenizer::default();
        let toks = tk.tokenize(text);
        tk.split_sentences(text, &toks).len()
    }

    #[test]
    fn basic_and_empty() {
        assert!(surfaces("").is_empty());
        assert_eq!(surfaces("It works well."), ["It", "works", "well", "."]);
    }

    #[test]
    fn clitics() {
        assert_eq!(surfaces("don't"), ["do", "n't"]);
        assert_eq!(surfaces("can't"), ["ca", "n't"]);
        assert_eq!(surfaces("We're here, it's John's."), ["We", "'re", "here", ",", "it", "'s", "John", "'s", "."]);
        assert_eq!(surfaces("I\u{2019}ll"), ["I", "\u{2019}ll"]);
    }

    #[test]
    fn numbers_abbreviations_and_dots() {
        assert_eq!(surfaces("Dr. Smith paid 3.50 in the U.S. today..."), [
            "Dr.", "Smith", "paid", "3.50", "in", "the", "U.S.", "today", "..."
        ]);
        assert_eq!(surfaces("well-known e.g. 1,000"), ["well-known", "e.g.", "1,000"]);
    }

    #[test]
    fn spans_reconstruct_source() {
        let text = "  Caf\u{e9}'s \u{201C}menu\u{201D} isn't bad\u{2026}\nOK? ";
        let toks = Tokenizer::default().tokenize(text);
        for t in &toks {
            assert_eq!(&text[t.span.0..t.span.1], t.surface);
        }
        for w in toks.windows(2) {
            assert!(w[0].span.1 <= w[1].span.0);
        }
    }

    #[test]
    fn sentence_examples() {
        assert_eq!(n_sentences("A. B? C!"), 3);
        assert_eq!(n_sentences("Dr. Smith left."), 1);
        assert_eq!(n_sentences("no terminal punctuation here"), 1);
        assert_eq!(n_sentences("Wait!!! Really?\" he said."), 3);
        assert_eq!(n_sentences("Heading line\nBody text goes here."), 2);
        assert_eq!(n_sentences(""), 0);
        assert_eq!(n_sentences("... !"), 0);
    }
}
