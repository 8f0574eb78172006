//! Count-based features: POS frequencies, voice/tense incidence, content
//! and function words, degrees, names and the pronoun battery.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::textproc::{AnnotatedText, Coarse, Degree, Tense, VerbForm, Voice};

const FIRST_NAMES: &str = include_str!("../../data/first_names.txt");
const HONORIFICS: [&str; 12] = [
    "mr.", "mrs.", "ms.", "dr.", "prof.", "mr", "mrs", "ms", "dr", "sir", "madam", "miss",
];

fn first_names() -> &'static HashSet<String> {
    static NAMES: OnceLock<HashSet<String>> = OnceLock::new();
    NAMES.get_or_init(|| crate::cleaning::parse_lines(FIRST_NAMES).into_iter().collect())
}

pub fn is_content(c: Coarse) -> bool {
    matches!(c, Coarse::Noun | Coarse::Propn | Coarse::Verb | Coarse::Adj | Coarse::Adv)
}

pub fn is_function(c: Coarse) -> bool {
    matches!(
        c,
        Coarse::Pron | Coarse::Det | Coarse::Adp | Coarse::Conj | Coarse::Part | Coarse::Aux
    )
}

/// Word tokens (those with alphanumeric content).
pub fn word_indices(a: &AnnotatedText) -> Vec<usize> {
    (0..a.tokens.len()).filter(|&i| a.tokens[i].is_word).collect()
}

fn ratio(count: usize, words: usize) -> Option<f64> {
    (words > 0).then(|| count as f64 / words as f64)
}

pub const POS_CLASSES: [&[Coarse]; 10] = [
    &[Coarse::Verb, Coarse::Aux],
    &[Coarse::Noun],
    &[Coarse::Adj],
    &[Coarse::Adv],
    &[Coarse::Det],
    &[Coarse::Intj],
    &[Coarse::Conj],
    &[Coarse::Part],
    &[Coarse::Num],
    &[Coarse::Pron],
];

/// Frequencies in [`POS_CLASSES`] order.
pub fn pos_frequencies(a: &AnnotatedText) -> Option<[f64; 10]> {
    let words = word_indices(a);
    if words.is_empty() {
        return None;
    }
    let mut out = [0.0; 10];
    for (k, class) in POS_CLASSES.iter().enumerate() {
        let n = words.iter().filter(|&&i| class.contains(&a.tags[i].coarse)).count();
        out[k] = n as f64 / words.len() as f64;
    }
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grammar {
    pub active: f64,
    pub passive: f64,
    pub past: f64,
    pub present: f64,
    pub future: f64,
    pub infinitive: f64,
}

/// Base verbs whose previous non-adverb token is `to` or a modal.
pub fn infinitive_count(a: &AnnotatedText) -> usize {
    let mut n = 0;
    for r in &a.sentences {
        for i in r.clone() {
            if !(a.tags[i].coarse.is_verbal() && a.tags[i].verb_form == Some(VerbForm::Vb)) {
                continue;
            }
            let mut k = i;
            while k > r.start && a.tags[k - 1].coarse == Coarse::Adv {
                k -= 1;
            }
            if k > r.start {
                let prev = &a.tags[k - 1];
                if a.xpos[k - 1] == "TO" || a.tokens[k - 1].lower == "to" || prev.verb_form == Some(VerbForm::Md) {
                    n += 1;
                }
            }
        }
    }
    n
}

/// All tokens of a verb group count towards its voice and tense.
pub fn grammar(a: &AnnotatedText) -> Option<Grammar> {
    let words = word_indices(a).len();
    if words == 0 {
        return None;
    }
    let (mut active, mut passive, mut past, mut present, mut future) = (0, 0, 0, 0, 0);
    for g in &a.verb_groups {
        let n = g.indices.len();
        match g.voice {
            Voice::Active => active += n,
            Voice::Passive => passive += n,
        }
        match g.tense {
            Tense::Past => past += n,
            Tense::Present => present += n,
            Tense::Future => future += n,
            Tense::None => {}
        }
    }
    let f = |c: usize| c as f64 / words as f64;
    Some(Grammar {
        active: f(active),
        passive: f(passive),
        past: f(past),
        present: f(present),
        future: f(future),
        infinitive: f(infinitive_count(a)),
    })
}

/// (ADJ+ADV+NOUN+PROPN+VERB) over word tokens.
pub fn lexical_density(a: &AnnotatedText) -> Option<f64> {
    let words = word_indices(a);
    let n = words.iter().filter(|&&i| is_content(a.tags[i].coarse)).count();
    ratio(n, words.len())
}

/// Degree of an adjective or adverb, with periphrastic more/most.
fn degree_at(a: &AnnotatedText, i: usize) -> Degree {
    let lower = a.tokens[i].lower.as_str();
    match lower {
        "better" | "worse" => return Degree::Comparative,
        "best" | "worst" => return Degree::Superlative,
        _ => {}
    }
    if i > 0 {
        match a.tokens[i - 1].lower.as_str() {
            "more" | "less" => return Degree::Comparative,
            "most" | "least" => return Degree::Superlative,
            _ => {}
        }
    }
    a.tags[i].degree.unwrap_or(Degree::Positive)
}

/// Pronoun battery slots, in registry order.
pub const PRONOUNS: [&str; 32] = [
    "i", "he", "she", "it", "you", "they", "me", "you_obj", "him", "her_obj", "us", "them", "my", "your", "his",
    "her_poss", "its", "our", "their", "yours", "theirs", "hers", "ours", "myself", "yourself", "himself", "herself",
    "itself", "ourselves", "yourselves", "themselves", "we",
];

/// Battery slot of the pronoun at `i`, if any.
pub fn pronoun_slot(a: &AnnotatedText, i: usize) -> Option<usize> {
    let tag = &a.tags[i];
    if tag.coarse != Coarse::Pron {
        return None;
    }
    let lower = a.tokens[i].lower.as_str();
    let key = match lower {
        "her" => {
            let next = a.tags.get(i + 1).map(|t| t.coarse);
            let before_nominal = matches!(next, Some(Coarse::Noun | Coarse::Propn | Coarse::Adj | Coarse::Num));
            if tag.possessive || before_nominal {
                "her_poss"
            } else {
                "her_obj"
            }
        }
        "you" => {
            let prev = if i > 0 { Some(a.tags[i - 1].coarse) } else { None };
            let next = a.tags.get(i + 1).map(|t| t.coarse);
            let after_governor = matches!(prev, Some(Coarse::Verb | Coarse::Adp));
            let before_verb = next.is_some_and(Coarse::is_verbal);
            if after_governor && !before_verb {
                "you_obj"
            } else {
                "you"
            }
        }
        other => other,
    };
    PRONOUNS.iter().position(|&p| p == key)
}

pub fn pronoun_counts(a: &AnnotatedText) -> [usize; 32] {
    let mut out = [0usize; 32];
    for i in 0..a.tokens.len() {
        if let Some(k) = pronoun_slot(a, i) {
            out[k] += 1;
        }
    }
    out
}

/// Aggregates by person/number over battery slots.
pub const FIRST_SINGULAR: &[&str] = &["i"];
pub const SECOND: &[&str] = &["you", "you_obj", "your", "yours", "yourself", "yourselves"];
pub const THIRD_SINGULAR: &[&str] = &[
    "he", "she", "it", "him", "her_obj", "his", "her_poss", "its", "hers", "himself", "herself", "itself",
];
pub const THIRD_PLURAL: &[&str] = &["they", "them", "their", "theirs", "themselves"];

fn personal_name_at(a: &AnnotatedText, i: usize) -> bool {
    if a.tags[i].coarse != Coarse::Propn || !a.tokens[i].surface.starts_with(|c: char| c.is_uppercase()) {
        return false;
    }
    if first_names().contains(&a.tokens[i].lower) {
        return true;
    }
    i > 0 && HONORIFICS.contains(&a.tokens[i - 1].lower.as_str())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Battery {
    pub content_words: f64,
    pub function_words: f64,
    pub content_word_types: f64,
    pub function_word_types: f64,
    pub function_word_count: usize,
    pub proper_names: f64,
    pub personal_names: f64,
    pub possessive_nouns: f64,
    /// Positive, comparative, superlative.
    pub adj: [f64; 3],
    pub adv: [f64; 3],
    pub pronouns: [f64; 32],
    pub first_person_singular: f64,
    pub second_person: f64,
    pub third_person_singular: f64,
    pub third_person_plural: f64,
}

fn degree_slot(d: Degree) -> usize {
    match d {
        Degree::Positive => 0,
        Degree::Comparative => 1,
        Degree::Superlative => 2,
    }
}

pub fn lexical_battery(a: &AnnotatedText) -> Option<Battery> {
    let words = word_indices(a);
    if words.is_empty() {
        return None;
    }
    let n = words.len() as f64;
    let (mut content, mut function) = (0usize, 0usize);
    let mut content_types = HashSet::new();
    let mut function_types = HashSet::new();
    let (mut proper, mut personal, mut possessive) = (0usize, 0usize, 0usize);
    let mut adj = [0usize; 3];
    let mut adv = [0usize; 3];
    for &i in &words {
        let c = a.tags[i].coarse;
        let lower = a.tokens[i].lower.as_str();
        if is_content(c) {
            content += 1;
            content_types.insert(lower);
        } else if is_function(c) {
            function += 1;
            function_types.insert(lower);
        }
        if c == Coarse::Propn {
            proper += 1;
            if personal_name_at(a, i) {
                personal += 1;
            }
        }
        if matches!(c, Coarse::Noun | Coarse::Propn) {
            let next = a.tags.get(i + 1);
            if next.is_some_and(|t| t.coarse == Coarse::Part && t.possessive) {
                possessive += 1;
            }
        }
        match c {
            Coarse::Adj => adj[degree_slot(degree_at(a, i))] += 1,
            Coarse::Adv => adv[degree_slot(degree_at(a, i))] += 1,
            _ => {}
        }
    }
    let counts = pronoun_counts(a);
    let agg = |set: &[&str]| {
        let c: usize = PRONOUNS
            .iter()
            .zip(counts)
            .filter(|(p, _)| set.contains(p))
            .map(|(_, c)| c)
            .sum();
        c as f64 / n
    };
    Some(Battery {
        content_words: content as f64 / n,
        function_words: function as f64 / n,
        content_word_types: content_types.len() as f64 / n,
        function_word_types: function_types.len() as f64 / n,
        function_word_count: function,
        proper_names: proper as f64 / n,
        personal_names: personal as f64 / n,
        possessive_nouns: possessive as f64 / n,
        adj: adj.map(|c| c as f64 / n),
        adv: adv.map(|c| c as f64 / n),
        pronouns: counts.map(|c| c as f64 / n),
        first_person_singular: agg(FIRST_SINGULAR),
        second_person: agg(SECOND),
        third_person_singular: agg(THIRD_SINGULAR),
        third_person_plural: agg(THIRD_PLURAL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::{AnnotatedText, Token};

    fn doc(pairs: &[(&str, &str)]) -> AnnotatedText {
        let mut pos = 0;
        let tokens: Vec<Token> = pairs
            .iter()
            .map(|(w, _)| {
                let t = Token::detached(w, pos);
                pos += w.len() + 1;
                t
            })
            .collect();
        let xpos = pairs.iter().map(|p| p.1.to_string()).collect();
        let n = tokens.len();
        AnnotatedText::from_penn(tokens, xpos, if n > 0 { vec![0..n] } else { vec![] })
    }

    fn slot(name: &str) -> usize {
        PRONOUNS.iter().position(|p| *p == name).unwrap()
    }

    #[test]
    fn pos_counts_the_dog_runs() {
        let f = pos_frequencies(&doc(&[("The", "DT"), ("dog", "NN"), ("runs", "VBZ"), (".", ".")])).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(f, [third, third, 0.0, 0.0, third, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let f = pos_frequencies(&doc(&[("1", "CD"), ("2", "CD"), ("3", "CD")])).unwrap();
        assert_eq!(f[8], 1.0);
        assert!(pos_frequencies(&doc(&[])).is_none());
    }

    #[test]
    fn grammar_counts_group_tokens() {
        let g = grammar(&doc(&[("The", "DT"), ("report", "NN"), ("was", "VBD"), ("written", "VBN"), (".", ".")])).unwrap();
        assert_eq!((g.passive, g.active, g.past), (0.5, 0.0, 0.5));
        let g = grammar(&doc(&[("We", "PRP"), ("will", "MD"), ("go", "VB"), (".", ".")])).unwrap();
        assert_eq!(g.future, 2.0 / 3.0);
        assert_eq!(g.infinitive, 1.0 / 3.0);
        let g = grammar(&doc(&[("Nice", "JJ"), ("weather", "NN")])).unwrap();
        assert_eq!([g.active, g.passive, g.past, g.present, g.future, g.infinitive], [0.0; 6]);
    }

    #[test]
    fn density_examples() {
        assert_eq!(lexical_density(&doc(&[("Dogs", "NNS"), ("bark", "VBP"), (".", ".")])), Some(1.0));
        assert_eq!(
            lexical_density(&doc(&[("It", "PRP"), ("is", "VBZ"), ("the", "DT"), ("one", "CD"), (".", ".")])),
            Some(0.0)
        );
        assert_eq!(lexical_density(&doc(&[])), None);
    }

    #[test]
    fn pronoun_battery() {
        let b = lexical_battery(&doc(&[("We", "PRP"), ("report", "VBP"), ("our", "PRP$"), ("results", "NNS"), (".", ".")]))
            .unwrap();
        assert_eq!(b.pronouns[slot("we")], 0.25);
        assert_eq!(b.pronouns[slot("our")], 0.25);
        let b = lexical_battery(&doc(&[("Dogs", "NNS"), ("bark", "VBP")])).unwrap();
        assert!(b.pronouns.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn her_disambiguation() {
        let a = doc(&[("her", "PRP"), ("book", "NN")]);
        assert_eq!(pronoun_slot(&a, 0), Some(slot("her_poss")));
        let a = doc(&[("saw", "VBD"), ("her", "PRP")]);
        assert_eq!(pronoun_slot(&a, 1), Some(slot("her_obj")));
    }

    #[test]
    fn you_positions_and_aggregates() {
        let a = doc(&[("You", "PRP"), ("see", "VBP"), ("me", "PRP"), ("and", "CC"), ("I", "PRP"), ("see", "VBP"), ("you", "PRP")]);
        assert_eq!(pronoun_slot(&a, 0), Some(slot("you")));
        assert_eq!(pronoun_slot(&a, 6), Some(slot("you_obj")));
        let b = lexical_battery(&a).unwrap();
        assert_eq!(b.first_person_singular, b.pronouns[slot("i")]);
        assert_eq!(b.second_person, 2.0 / 7.0);
    }

    #[test]
    fn degrees_names_and_possessives() {
        let a = doc(&[
            ("Dr.", "NNP"),
            ("Quinn", "NNP"),
            ("met", "VBD"),
            ("Mary", "NNP"),
            ("'s", "POS"),
            ("most", "RBS"),
            ("useful", "JJ"),
            ("and", "CC"),
            ("bigger", "JJR"),
            ("cat", "NN"),
        ]);
        let b = lexical_battery(&a).unwrap();
        let n = 10.0;
        assert_eq!(b.personal_names, 2.0 / n);
        assert_eq!(b.proper_names, 3.0 / n);
        assert_eq!(b.possessive_nouns, 1.0 / n);
        assert_eq!(b.adj, [0.0, 1.0 / n, 1.0 / n]);
    }
}
