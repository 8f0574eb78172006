//! Tokenization, sentence splitting, syllables, POS tagging and verb groups.

pub mod conllu;
pub mod lemma;
pub mod perceptron;
pub mod syllables;
pub mod tagger;
pub mod tags;
pub mod tokenize;
pub mod verbs;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use conllu::{emit_conllu, ingest_conllu, parse_conllu, write_conllu};
pub use lemma::lemmatize;
pub use syllables::{count_syllables, token_syllables};
pub use tagger::Tagger;
pub use tags::{Coarse, Degree, PosTag, PronounClass, VerbForm};
pub use tokenize::{Token, Tokenizer};
pub use verbs::{analyze_verb_groups, Tense, VerbGroup, Voice};

/// Tokenize with the default abbreviation list.
pub fn tokenize(text: &str) -> Vec<Token> {
    Tokenizer::default().tokenize(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedText {
    pub tokens: Vec<Token>,
    /// Penn-style fine tags, one per token.
    pub xpos: Vec<String>,
    pub tags: Vec<PosTag>,
    pub sentences: Vec<Range<usize>>,
    pub verb_groups: Vec<VerbGroup>,
    /// Length of the source text in characters.
    pub char_len: usize,
}

impl AnnotatedText {
    /// Build from tokens and Penn tags; coarse tags and verb groups are derived.
    pub fn from_penn(tokens: Vec<Token>, mut xpos: Vec<String>, sentences: Vec<Range<usize>>) -> AnnotatedText {
        assert_eq!(tokens.len(), xpos.len(), "one tag per token");
        for r in cover(&sentences, tokens.len()) {
            repair_penn(&tokens[r.clone()], &mut xpos[r]);
        }
        let tags = map_penn(&tokens, &xpos, &sentences);
        AnnotatedText::from_parts(tokens, xpos, tags, sentences)
    }

    /// Build from externally supplied coarse and fine tags.
    pub fn from_parts(
        tokens: Vec<Token>,
        xpos: Vec<String>,
        tags: Vec<PosTag>,
        sentences: Vec<Range<usize>>,
    ) -> AnnotatedText {
        let verb_groups = analyze_verb_groups(&tokens, &tags, &sentences);
        // without the source, count one character per gap between tokens
        let gaps = tokens.windows(2).filter(|w| w[1].span.0 > w[0].span.1).count();
        let char_len = tokens.iter().map(|t| t.surface.chars().count()).sum::<usize>() + gaps;
        AnnotatedText {
            char_len,
            tokens,
            xpos,
            tags,
            sentences,
            verb_groups,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word).count()
    }

    /// Lemma per token.
    pub fn lemmas(&self) -> Vec<String> {
        self.tokens
            .iter()
            .zip(&self.tags)
            .map(|(t, tag)| lemmatize(&t.lower, tag.coarse, tag.degree.is_some_and(|d| d != Degree::Positive)))
            .collect()
    }
}

/// Sentences plus any uncovered token runs, in order.
fn cover(sentences: &[Range<usize>], n: usize) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for s in sentences {
        if s.start > pos {
            out.push(pos..s.start);
        }
        out.push(s.clone());
        pos = s.end;
    }
    if pos < n {
        out.push(pos..n);
    }
    out
}

const SUBJECT_PRONOUNS: [&str; 8] = ["i", "you", "he", "she", "it", "we", "they", "there"];

/// Context fixes the perceptron cannot make reliably from its window.
fn repair_penn(tokens: &[Token], xpos: &mut [String]) {
    for i in 0..tokens.len() {
        let lower = tokens[i].lower.as_str();
        if tokens[i].surface == "US" {
            xpos[i] = "NNP".into();
        }
        let next = xpos.get(i + 1).map(String::as_str).unwrap_or("");
        if lower == "her" && (next.starts_with("NN") || next.starts_with("JJ") || next == "CD") {
            xpos[i] = "PRP$".into();
        }
        // a bare participle right after a subject is a past tense verb
        if xpos[i] == "VBN" {
            let mut k = i;
            while k > 0 && (xpos[k - 1].starts_with("RB")) {
                k -= 1;
            }
            if k > 0 && xpos[k - 1] == "PRP" && SUBJECT_PRONOUNS.contains(&tokens[k - 1].lower.as_str()) {
                xpos[i] = "VBD".into();
            }
        }
        if lower == "'s" && i > 0 {
            let prev = tokens[i - 1].lower.as_str();
            let is_verb = matches!(
                prev,
                "it" | "he" | "she" | "that" | "there" | "what" | "who" | "here" | "this" | "where" | "how"
            );
            xpos[i] = if is_verb { "VBZ" } else { "POS" }.into();
        }
    }
}

/// Whether a verb follows within a short window, skipping adverbs,
/// negation and an inverted subject pronoun.
fn verb_follows(tokens: &[Token], xpos: &[String], i: usize, end: usize) -> bool {
    let mut skipped_subject = 0;
    let mut k = i + 1;
    while k < end {
        let x = xpos[k].as_str();
        let lower = tokens[k].lower.as_str();
        if x.starts_with("VB") {
            return true;
        }
        if x.starts_with("RB") || lower == "not" || lower == "n't" {
            k += 1;
        } else if skipped_subject < 2 && (SUBJECT_PRONOUNS.contains(&lower) || x == "PRP") {
            skipped_subject += 1;
            k += 1;
        } else {
            return false;
        }
    }
    false
}

fn map_penn(tokens: &[Token], xpos: &[String], sentences: &[Range<usize>]) -> Vec<PosTag> {
    let mut tags = vec![PosTag::new(Coarse::X); tokens.len()];
    for r in cover(sentences, tokens.len()) {
        for i in r.clone() {
            let before_verb = verb_follows(tokens, xpos, i, r.end);
            tags[i] = PosTag::from_penn(&xpos[i], &tokens[i].lower, before_verb);
        }
    }
    tags
}

/// Tokenizer plus tagger.
#[derive(Debug, Clone)]
pub struct Annotator<'a> {
    tokenizer: Tokenizer,
    tagger: &'a Tagger,
}

impl Annotator<'static> {
    /// Default tokenizer with the built-in model.
    pub fn builtin() -> Result<Annotator<'static>> {
        Ok(Annotator::new(Tokenizer::default(), Tagger::builtin()?))
    }
}

impl<'a> Annotator<'a> {
    pub fn new(tokenizer: Tokenizer, tagger: &'a Tagger) -> Annotator<'a> {
        Annotator { tokenizer, tagger }
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    /// Penn tags for an already tokenized and split text.
    pub fn pos_tag(&self, tokens: &[Token], sentences: &[Range<usize>]) -> Vec<String> {
        let mut xpos = vec![String::new(); tokens.len()];
        for r in cover(sentences, tokens.len()) {
            let words: Vec<&str> = tokens[r.clone()].iter().map(|t| t.surface.as_str()).collect();
            for (slot, tag) in xpos[r].iter_mut().zip(self.tagger.tag_words(&words)) {
                *slot = tag;
            }
        }
        xpos
    }

    pub fn annotate(&self, text: &str) -> AnnotatedText {
        let tokens = self.tokenizer.tokenize(text);
        let sentences = self.tokenizer.split_sentences(text, &tokens);
        let xpos = self.pos_tag(&tokens, &sentences);
        let mut out = AnnotatedText::from_penn(tokens, xpos, sentences);
        out.char_len = text.chars().count();
        out
    }
}
