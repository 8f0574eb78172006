use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Registry revision; bump whenever keys or definitions change.
pub const REGISTRY_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    LexicalDiversity,
    LexicalDensity,
    Sentiment,
    Readability,
    Pos,
    Grammatical,
    Lexical,
    General,
}

impl Category {
    pub fn key(self) -> &'static str {
        match self {
            Category::LexicalDiversity => "lexical_diversity",
            Category::LexicalDensity => "lexical_density",
            Category::Sentiment => "sentiment",
            Category::Readability => "readability",
            Category::Pos => "pos",
            Category::Grammatical => "grammatical",
            Category::Lexical => "lexical",
            Category::General => "general",
        }
    }
}

/// How a value is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Count divided by word tokens, in [0, 1].
    Frequency,
    /// Raw count.
    Count,
    /// Any other real-valued score.
    Score,
}

pub struct FeatureDef {
    pub key: &'static str,
    pub category: Category,
    pub scale: Scale,
    pub description: &'static str,
}

const fn def(key: &'static str, category: Category, scale: Scale, description: &'static str) -> FeatureDef {
    FeatureDef {
        key,
        category,
        scale,
        description,
    }
}

use Category::*;
use Scale::*;

pub const N_FEATURES: usize = 80;

pub static REGISTRY: [FeatureDef; N_FEATURES] = [
    def("div.mattr", LexicalDiversity, Score, "moving-average type-token ratio, window 100"),
    def("div.lemma_mattr", LexicalDiversity, Score, "MATTR over lemmas"),
    def("div.unique_words", LexicalDiversity, Count, "word types occurring exactly once"),
    def("div.unique_words_ratio", LexicalDiversity, Frequency, "hapax count over word tokens"),
    def("density.lexical_density", LexicalDensity, Frequency, "content words over word tokens"),
    def("density.function_word_count", LexicalDensity, Count, "number of function words"),
    def("sent.polarity", Sentiment, Score, "lexicon polarity in [-1, 1]"),
    def("sent.subjectivity", Sentiment, Score, "lexicon subjectivity in [0, 1]"),
    def("readability.flesch", Readability, Score, "Flesch reading ease"),
    def("readability.gunning_fog", Readability, Score, "Gunning fog index"),
    def("readability.avg_sentence_len", Readability, Score, "mean words per sentence"),
    def("readability.sentence_len_std", Readability, Score, "population std of words per sentence"),
    def("readability.long_sentences", Readability, Count, "sentences with at least 35 words"),
    def("readability.short_sentences", Readability, Count, "sentences with at most 10 words"),
    def("readability.length_chars", Readability, Count, "text length in characters"),
    def("pos.verbs", Pos, Frequency, "VERB and AUX tokens"),
    def("pos.nouns", Pos, Frequency, "NOUN tokens"),
    def("pos.adjectives", Pos, Frequency, "ADJ tokens"),
    def("pos.adverbs", Pos, Frequency, "ADV tokens"),
    def("pos.determiners", Pos, Frequency, "DET tokens"),
    def("pos.interjections", Pos, Frequency, "INTJ tokens"),
    def("pos.conjunctions", Pos, Frequency, "CONJ tokens"),
    def("pos.particles", Pos, Frequency, "PART tokens"),
    def("pos.numerals", Pos, Frequency, "NUM tokens"),
    def("pos.pronouns", Pos, Frequency, "PRON tokens"),
    def("gram.active_voice", Grammatical, Frequency, "verb tokens in active groups"),
    def("gram.passive_voice", Grammatical, Frequency, "verb tokens in passive groups"),
    def("gram.past", Grammatical, Frequency, "verb tokens in past-tense groups"),
    def("gram.present", Grammatical, Frequency, "verb tokens in present-tense groups"),
    def("gram.future", Grammatical, Frequency, "verb tokens in future-tense groups"),
    def("general.infinitive", General, Frequency, "base verbs after to or a modal"),
    def("lex.content_words", Lexical, Frequency, "content word tokens"),
    def("lex.function_words", Lexical, Frequency, "function word tokens"),
    def("lex.content_word_types", Lexical, Frequency, "distinct content words over word tokens"),
    def("lex.function_word_types", Lexical, Frequency, "distinct function words over word tokens"),
    def("lex.proper_names", Lexical, Frequency, "PROPN tokens"),
    def("lex.personal_names", Lexical, Frequency, "PROPN tokens that look like person names"),
    def("lex.possessive_nouns", Lexical, Frequency, "nouns followed by a possessive marker"),
    def("lex.adj_positive", Lexical, Frequency, "adjectives in positive degree"),
    def("lex.adj_comparative", Lexical, Frequency, "adjectives in comparative degree"),
    def("lex.adj_superlative", Lexical, Frequency, "adjectives in superlative degree"),
    def("lex.adv_positive", Lexical, Frequency, "adverbs in positive degree"),
    def("lex.adv_comparative", Lexical, Frequency, "adverbs in comparative degree"),
    def("lex.adv_superlative", Lexical, Frequency, "adverbs in superlative degree"),
    def("lex.pron_i", Lexical, Frequency, "I"),
    def("lex.pron_he", Lexical, Frequency, "he"),
    def("lex.pron_she", Lexical, Frequency, "she"),
    def("lex.pron_it", Lexical, Frequency, "it"),
    def("lex.pron_you", Lexical, Frequency, "you, subject position"),
    def("lex.pron_they", Lexical, Frequency, "they"),
    def("lex.pron_me", Lexical, Frequency, "me"),
    def("lex.pron_you_obj", Lexical, Frequency, "you, object position"),
    def("lex.pron_him", Lexical, Frequency, "him"),
    def("lex.pron_her_obj", Lexical, Frequency, "her, object"),
    def("lex.pron_us", Lexical, Frequency, "us"),
    def("lex.pron_them", Lexical, Frequency, "them"),
    def("lex.pron_my", Lexical, Frequency, "my"),
    def("lex.pron_your", Lexical, Frequency, "your"),
    def("lex.pron_his", Lexical, Frequency, "his"),
    def("lex.pron_her_poss", Lexical, Frequency, "her, possessive"),
    def("lex.pron_its", Lexical, Frequency, "its"),
    def("lex.pron_our", Lexical, Frequency, "our"),
    def("lex.pron_their", Lexical, Frequency, "their"),
    def("lex.pron_yours", Lexical, Frequency, "yours"),
    def("lex.pron_theirs", Lexical, Frequency, "theirs"),
    def("lex.pron_hers", Lexical, Frequency, "hers"),
    def("lex.pron_ours", Lexical, Frequency, "ours"),
    def("lex.pron_myself", Lexical, Frequency, "myself"),
    def("lex.pron_yourself", Lexical, Frequency, "yourself"),
    def("lex.pron_himself", Lexical, Frequency, "himself"),
    def("lex.pron_herself", Lexical, Frequency, "herself"),
    def("lex.pron_itself", Lexical, Frequency, "itself"),
    def("lex.pron_ourselves", Lexical, Frequency, "ourselves"),
    def("lex.pron_yourselves", Lexical, Frequency, "yourselves"),
    def("lex.pron_themselves", Lexical, Frequency, "themselves"),
    def("lex.pron_we", Lexical, Frequency, "we"),
    def("lex.first_person_singular", Lexical, Frequency, "first person singular pronouns"),
    def("lex.second_person", Lexical, Frequency, "second person pronouns"),
    def("lex.third_person_singular", Lexical, Frequency, "third person singular pronouns"),
    def("lex.third_person_plural", Lexical, Frequency, "third person plural pronouns"),
];

/// Index into the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureId(u8);

impl FeatureId {
    pub fn all() -> impl Iterator<Item = FeatureId> {
        (0..N_FEATURES as u8).map(FeatureId)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Option<FeatureId> {
        (i < N_FEATURES).then_some(FeatureId(i as u8))
    }

    pub fn from_key(key: &str) -> Option<FeatureId> {
        REGISTRY.iter().position(|d| d.key == key).map(|i| FeatureId(i as u8))
    }

    /// Like [`FeatureId::from_key`] for keys known at compile time.
    pub(crate) fn of(key: &str) -> FeatureId {
        FeatureId::from_key(key).unwrap_or_else(|| panic!("unregistered feature {key}"))
    }

    pub fn def(self) -> &'static FeatureDef {
        &REGISTRY[self.index()]
    }

    pub fn key(self) -> &'static str {
        self.def().key
    }

    pub fn category(self) -> Category {
        self.def().category
    }

    pub fn scale(self) -> Scale {
        self.def().scale
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for FeatureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FeatureId::from_key(s).ok_or_else(|| Error::Argument(format!("unknown feature {s:?}")))
    }
}

impl Serialize for FeatureId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.key())
    }
}

impl<'de> Deserialize<'de> for FeatureId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Registry as JSON, for documentation.
pub fn registry_json() -> serde_json::Value {
    let features: Vec<serde_json::Value> = REGISTRY
        .iter()
        .map(|d| {
            serde_json::json!({
                "key": d.key,
                "category": d.category,
                "scale": d.scale,
                "description": d.description,
            })
        })
        .collect();
    serde_json::json!({ "version": REGISTRY_VERSION, "features": features })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn keys_unique_and_round_trip() {
        let keys: HashSet<&str> = REGISTRY.iter().map(|d| d.key).collect();
        assert_eq!(keys.len(), N_FEATURES);
        for id in FeatureId::all() {
            assert_eq!(FeatureId::from_key(id.key()), Some(id));
            let j = serde_json::to_string(&id).unwrap();
            assert_eq!(serde_json::from_str::<FeatureId>(&j).unwrap(), id);
        }
        assert!("lex.nope".parse::<FeatureId>().is_err());
    }

    #[test]
    fn category_counts() {
        let count = |c: Category| REGISTRY.iter().filter(|d| d.category == c).count();
        assert_eq!(count(Pos), 10);
        assert_eq!(count(Grammatical), 5);
        assert_eq!(count(General), 1);
        assert_eq!(count(Lexical), 49);
    }
}
