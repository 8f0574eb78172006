//! The 80-metric feature registry and per-document / corpus profiles.

pub mod diversity;
pub mod lexical;
pub mod readability;
pub mod registry;
pub mod sentiment;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::{AnnotatedText, Annotator};

pub use diversity::{mattr, MATTR_WINDOW};
pub use registry::{registry_json, Category, FeatureDef, FeatureId, Scale, N_FEATURES, REGISTRY, REGISTRY_VERSION};
pub use sentiment::{sentiment, SentimentLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Document,
    CorpusMean,
}

/// One value per registered feature; `None` marks not-applicable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureProfile {
    pub values: Vec<Option<f64>>,
    pub basis: Basis,
    pub n_docs: usize,
    /// Documents contributing to each feature's mean.
    pub n_applicable: Vec<usize>,
}

impl FeatureProfile {
    pub fn get(&self, id: FeatureId) -> Option<f64> {
        self.values[id.index()]
    }

    pub fn get_key(&self, key: &str) -> Option<f64> {
        FeatureId::from_key(key).and_then(|id| self.get(id))
    }

    pub fn iter(&self) -> impl Iterator<Item = (FeatureId, Option<f64>)> + '_ {
        FeatureId::all().zip(self.values.iter().copied())
    }
}

fn set(values: &mut [Option<f64>], key: &str, v: Option<f64>) {
    values[FeatureId::of(key).index()] = v;
}

/// Feature values for one annotated document.
pub fn document_profile(a: &AnnotatedText) -> FeatureProfile {
    let mut v: Vec<Option<f64>> = vec![None; N_FEATURES];
    let words = lexical::word_indices(a);

    let forms: Vec<&str> = words.iter().map(|&i| a.tokens[i].lower.as_str()).collect();
    let lemmas_all = a.lemmas();
    let lemmas: Vec<&str> = words.iter().map(|&i| lemmas_all[i].as_str()).collect();
    set(&mut v, "div.mattr", mattr(&forms, MATTR_WINDOW));
    set(&mut v, "div.lemma_mattr", mattr(&lemmas, MATTR_WINDOW));
    let hapax = diversity::hapax_count(&forms);
    let nonempty = !words.is_empty();
    set(&mut v, "div.unique_words", nonempty.then_some(hapax as f64));
    set(&mut v, "div.unique_words_ratio", nonempty.then(|| hapax as f64 / words.len() as f64));

    set(&mut v, "density.lexical_density", lexical::lexical_density(a));

    let (p, s) = sentiment(SentimentLexicon::builtin(), a.tokens.iter().map(|t| t.lower.as_str()));
    set(&mut v, "sent.polarity", Some(p));
    set(&mut v, "sent.subjectivity", Some(s));

    if let Some(r) = readability::readability(a) {
        set(&mut v, "readability.flesch", Some(r.flesch));
        set(&mut v, "readability.gunning_fog", Some(r.gunning_fog));
        set(&mut v, "readability.avg_sentence_len", Some(r.avg_sentence_len));
        set(&mut v, "readability.sentence_len_std", Some(r.sentence_len_std));
        set(&mut v, "readability.long_sentences", Some(r.n_long_sentences as f64));
        set(&mut v, "readability.short_sentences", Some(r.n_short_sentences as f64));
        set(&mut v, "readability.length_chars", Some(r.length_chars as f64));
    }

    if let Some(f) = lexical::pos_frequencies(a) {
        let keys = [
            "pos.verbs",
            "pos.nouns",
            "pos.adjectives",
            "pos.adverbs",
            "pos.determiners",
            "pos.interjections",
            "pos.conjunctions",
            "pos.particles",
            "pos.numerals",
            "pos.pronouns",
        ];
        for (k, x) in keys.iter().zip(f) {
            set(&mut v, k, Some(x));
        }
    }

    if let Some(g) = lexical::grammar(a) {
        set(&mut v, "gram.active_voice", Some(g.active));
        set(&mut v, "gram.passive_voice", Some(g.passive));
        set(&mut v, "gram.past", Some(g.past));
        set(&mut v, "gram.present", Some(g.present));
        set(&mut v, "gram.future", Some(g.future));
        set(&mut v, "general.infinitive", Some(g.infinitive));
    }

    if let Some(b) = lexical::lexical_battery(a) {
        set(&mut v, "density.function_word_count", Some(b.function_word_count as f64));
        set(&mut v, "lex.content_words", Some(b.content_words));
        set(&mut v, "lex.function_words", Some(b.function_words));
        set(&mut v, "lex.content_word_types", Some(b.content_word_types));
        set(&mut v, "lex.function_word_types", Some(b.function_word_types));
        set(&mut v, "lex.proper_names", Some(b.proper_names));
        set(&mut v, "lex.personal_names", Some(b.personal_names));
        set(&mut v, "lex.possessive_nouns", Some(b.possessive_nouns));
        for (deg, k) in ["positive", "comparative", "superlative"].iter().enumerate() {
            set(&mut v, &format!("lex.adj_{k}"), Some(b.adj[deg]));
            set(&mut v, &format!("lex.adv_{k}"), Some(b.adv[deg]));
        }
        for (slot, name) in lexical::PRONOUNS.iter().enumerate() {
            set(&mut v, &format!("lex.pron_{name}"), Some(b.pronouns[slot]));
        }
        set(&mut v, "lex.first_person_singular", Some(b.first_person_singular));
        set(&mut v, "lex.second_person", Some(b.second_person));
        set(&mut v, "lex.third_person_singular", Some(b.third_person_singular));
        set(&mut v, "lex.third_person_plural", Some(b.third_person_plural));
    }

    let n_applicable = v.iter().map(|x| usize::from(x.is_some())).collect();
    FeatureProfile {
        values: v,
        basis: Basis::Document,
        n_docs: 1,
        n_applicable,
    }
}

/// Masked arithmetic mean of document profiles, per feature.
pub fn mean_profile<'a>(profiles: impl IntoIterator<Item = &'a FeatureProfile>) -> Result<FeatureProfile> {
    let mut sums = vec![0.0f64; N_FEATURES];
    let mut counts = vec![0usize; N_FEATURES];
    let mut n_docs = 0;
    for p in profiles {
        n_docs += 1;
        for (k, x) in p.values.iter().enumerate() {
            if let Some(x) = x {
                sums[k] += x;
                counts[k] += 1;
            }
        }
    }
    if n_docs == 0 {
        return Err(Error::Argument("cannot profile an empty document list".into()));
    }
    let values = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
        .collect();
    Ok(FeatureProfile {
        values,
        basis: Basis::CorpusMean,
        n_docs,
        n_applicable: counts,
    })
}

/// Corpus-mean profile of annotated documents.
pub fn compute_profile(docs: &[AnnotatedText]) -> Result<FeatureProfile> {
    if docs.is_empty() {
        return Err(Error::Argument("cannot profile an empty document list".into()));
    }
    let per_doc: Vec<FeatureProfile> = docs.iter().map(document_profile).collect();
    mean_profile(&per_doc)
}

/// Annotate and profile raw texts in parallel; order is preserved.
pub fn profile_texts(annotator: &Annotator<'_>, texts: &[&str]) -> Vec<FeatureProfile> {
    use rayon::prelude::*;
    texts
        .par_iter()
        .map(|t| document_profile(&annotator.annotate(t)))
        .collect()
}
