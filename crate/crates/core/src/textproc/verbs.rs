//! Verb-group chunking with tense and voice labels.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::tags::{is_be_form, is_get_form, Coarse, PosTag, VerbForm};
use super::tokenize::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    Active,
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbGroup {
    /// Verbal tokens of the group, auxiliaries first; the head is last.
    pub indices: Vec<usize>,
    pub head_index: usize,
    pub voice: Voice,
    pub tense: Tense,
}

/// Tokens that may sit inside a verb group without ending it.
fn is_interrupter(tok: &Token, tag: &PosTag) -> bool {
    tag.coarse == Coarse::Adv || matches!(tok.lower.as_str(), "not" | "n't")
}

fn tense_of(tokens: &[Token], tags: &[PosTag], indices: &[usize]) -> Tense {
    let first_finite = indices
        .iter()
        .find(|&&i| tags[i].verb_form.is_some_and(VerbForm::is_finite));
    match first_finite {
        None => Tense::None,
        Some(&i) => match tags[i].verb_form {
            Some(VerbForm::Md) => match tokens[i].lower.as_str() {
                "will" | "shall" | "'ll" | "wo" => Tense::Future,
                _ => Tense::None,
            },
            Some(VerbForm::Vbd) => Tense::Past,
            Some(VerbForm::Vbz) | Some(VerbForm::Vbp) => Tense::Present,
            _ => Tense::None,
        },
    }
}

fn voice_of(tokens: &[Token], tags: &[PosTag], indices: &[usize]) -> Voice {
    let n = indices.len();
    if n >= 2 {
        let head = indices[n - 1];
        let before = indices[n - 2];
        let lower = tokens[before].lower.as_str();
        if tags[head].verb_form == Some(VerbForm::Vbn) && (is_be_form(lower) || is_get_form(lower)) {
            return Voice::Passive;
        }
    }
    Voice::Active
}

/// Chunk verb groups inside each sentence. A group is a run of auxiliaries
/// (adverbs and negation may intervene) closed by the first non-auxiliary
/// verb; a get-form followed by a participle also continues the run.
pub fn analyze_verb_groups(tokens: &[Token], tags: &[PosTag], sentences: &[Range<usize>]) -> Vec<VerbGroup> {
    let mut groups = Vec::new();
    for sent in sentences {
        let mut i = sent.start;
        while i < sent.end {
            if !tags[i].coarse.is_verbal() {
                i += 1;
                continue;
            }
            let mut indices = vec![i];
            let mut j = i;
            loop {
                let cur = indices[indices.len() - 1];
                let continues = tags[cur].coarse == Coarse::Aux || is_get_form(&tokens[cur].lower);
                if !continues {
                    break;
                }
                let mut k = j + 1;
                while k < sent.end && is_interrupter(&tokens[k], &tags[k]) {
                    k += 1;
                }
                if k >= sent.end || !tags[k].coarse.is_verbal() {
                    break;
                }
                // a get-form only chains into a participle
                if tags[cur].coarse != Coarse::Aux && tags[k].verb_form != Some(VerbForm::Vbn) {
                    break;
                }
                indices.push(k);
                j = k;
            }
            let head_index = *indices.last().unwrap();
            groups.push(VerbGroup {
                tense: tense_of(tokens, tags, &indices),
                voice: voice_of(tokens, tags, &indices),
                head_index,
                indices,
            });
            i = j + 1;
        }
    }
    groups
}
