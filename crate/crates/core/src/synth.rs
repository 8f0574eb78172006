//! Seeded synthetic corpora with controlled linguistic differences between
//! human and AI texts. Used by tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{split, stable_hash, Corpus, GenerationConfig, Manifest, PromptStrategy, TextRecord};
use crate::error::Result;

pub const SPLIT_RATIOS: (f64, f64, f64) = (0.5, 0.17, 0.33);

const SUBJECTS: [&str; 10] = [
    "team", "committee", "company", "author", "editor", "manager", "student", "teacher", "group", "council",
];
const OBJECTS: [&str; 10] = [
    "plans", "results", "reports", "designs", "proposals", "methods", "figures", "tables", "samples", "records",
];
/// base, third person singular, past / participle
const VERBS: [(&str, &str, &str); 10] = [
    ("review", "reviews", "reviewed"),
    ("check", "checks", "checked"),
    ("test", "tests", "tested"),
    ("present", "presents", "presented"),
    ("support", "supports", "supported"),
    ("record", "records", "recorded"),
    ("examine", "examines", "examined"),
    ("publish", "publishes", "published"),
    ("collect", "collects", "collected"),
    ("compare", "compares", "compared"),
];
const ADVERBS: [&str; 4] = ["carefully", "quickly", "openly", "regularly"];

/// Adjective pairs matched on length, syllables, subjectivity and intensity,
/// differing in polarity sign.
pub const POLARITY_PAIRS: [(&str, &str); 8] = [
    ("superb", "insane"),
    ("perfect", "fearful"),
    ("wonderful", "repellent"),
    ("splendid", "dreadful"),
    ("proud", "bleak"),
    ("nice", "grim"),
    ("ideal", "awful"),
    ("brilliant", "desperate"),
];

/// Per-sentence probabilities of each style marker.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Mix {
    pub past: f64,
    pub future: f64,
    pub passive: f64,
    pub we: f64,
    pub they: f64,
    pub numerals: f64,
    pub adverb: f64,
}

impl Mix {
    /// Plain present-tense, active, third-person prose.
    pub fn plain() -> Mix {
        Mix {
            adverb: 0.5,
            ..Mix::default()
        }
    }

    /// A mix where one marker is always present.
    pub fn only(marker: Marker) -> Mix {
        let mut m = Mix::plain();
        match marker {
            Marker::Past => m.past = 1.0,
            Marker::Future => m.future = 1.0,
            Marker::Passive => m.passive = 1.0,
            Marker::We => m.we = 1.0,
            Marker::They => m.they = 1.0,
            Marker::Numerals => m.numerals = 1.0,
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Past,
    Future,
    Passive,
    We,
    They,
    Numerals,
}

impl Marker {
    pub const ALL: [Marker; 6] = [
        Marker::Past,
        Marker::Future,
        Marker::Passive,
        Marker::We,
        Marker::They,
        Marker::Numerals,
    ];
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn sentence(rng: &mut ChaCha8Rng, mix: &Mix) -> String {
    let subj = *SUBJECTS.choose(rng).unwrap();
    let obj = *OBJECTS.choose(rng).unwrap();
    let (base, third, past) = *VERBS.choose(rng).unwrap();
    let adv = if rng.gen_bool(mix.adverb) {
        format!(" {}", ADVERBS.choose(rng).unwrap())
    } else {
        String::new()
    };
    let is_past = rng.gen_bool(mix.past);
    let is_future = !is_past && rng.gen_bool(mix.future);
    let passive = rng.gen_bool(mix.passive);
    let pronoun = if rng.gen_bool(mix.we) {
        Some(("We", "us"))
    } else if rng.gen_bool(mix.they) {
        Some(("They", "them"))
    } else {
        None
    };
    let object = if rng.gen_bool(mix.numerals) {
        format!("{} {obj}", rng.gen_range(2..13))
    } else {
        format!("the {obj}")
    };

    if passive {
        let aux = if is_past {
            "were"
        } else if is_future {
            "will be"
        } else {
            "are"
        };
        let agent = match pronoun {
            Some((_, obj_form)) => obj_form.to_string(),
            None => format!("the {subj}"),
        };
        format!("{} {aux} {past} by {agent}{adv}.", capitalize(&object))
    } else {
        let (subject, plural) = match pronoun {
            Some((p, _)) => (p.to_string(), true),
            None => (format!("The {subj}"), false),
        };
        let verb = if is_past {
            past.to_string()
        } else if is_future {
            format!("will {base}")
        } else if plural {
            base.to_string()
        } else {
            third.to_string()
        };
        format!("{subject} {verb} {object}{adv}.")
    }
}

/// One document of `n_sentences` sentences drawn from `mix`.
pub fn document(rng: &mut ChaCha8Rng, mix: &Mix, n_sentences: usize) -> String {
    (0..n_sentences).map(|_| sentence(rng, mix)).collect::<Vec<_>>().join(" ")
}

fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stable_hash(name))
}

fn finish(records: Vec<TextRecord>, manifest: Manifest, seed: u64) -> Result<Corpus> {
    let corpus = Corpus::new(records, manifest)?;
    let splits = split(&corpus, SPLIT_RATIOS, seed)?;
    corpus.with_splits(splits)
}

/// Humans drawn from `human`, and for each config an AI text per human
/// drawn from that config's mix. Documents have 5 to 9 sentences.
pub fn style_corpus(n_humans: usize, human: Mix, configs: &[(GenerationConfig, Mix)], seed: u64) -> Result<Corpus> {
    let mut manifest = Manifest {
        prompts: Vec::new(),
        models: Vec::new(),
        datasets: Vec::new(),
    };
    for (c, _) in configs {
        if !manifest.prompts.contains(&c.prompt) {
            manifest.prompts.push(c.prompt);
        }
        if !manifest.models.contains(&c.model) {
            manifest.models.push(c.model.clone());
        }
        if !manifest.datasets.contains(&c.dataset) {
            manifest.datasets.push(c.dataset.clone());
        }
    }
    let mut records = Vec::new();
    for d in &manifest.datasets {
        let mut rng = rng_for(seed, d);
        for i in 0..n_humans {
            let n = rng.gen_range(5..10);
            records.push(TextRecord::human(format!("{d}-h{i:05}"), d.clone(), document(&mut rng, &human, n)));
        }
    }
    for (c, mix) in configs {
        let mut rng = rng_for(seed, &c.id());
        for i in 0..n_humans {
            let n = rng.gen_range(5..10);
            let pair = format!("{}-h{i:05}", c.dataset);
            records.push(TextRecord::ai(format!("{}-a{i:05}", c.id()), c, pair, document(&mut rng, mix, n)));
        }
    }
    finish(records, manifest, seed)
}

/// Six prompt configs for one model and dataset, AI config `p` marked by
/// `markers[p]`.
pub fn marker_corpus(n_humans: usize, markers: &[Marker], seed: u64) -> Result<Corpus> {
    let configs: Vec<(GenerationConfig, Mix)> = PromptStrategy::ALL
        .iter()
        .zip(markers)
        .map(|(&p, &m)| (GenerationConfig::new(p, "synth-model", "synth"), Mix::only(m)))
        .collect();
    style_corpus(n_humans, Mix::plain(), &configs, seed)
}

/// Every config of `manifest` with the same AI mix, so all cells are
/// exchangeable.
pub fn iid_corpus(manifest: &Manifest, n_humans: usize, human: Mix, ai: Mix, seed: u64) -> Result<Corpus> {
    let configs: Vec<(GenerationConfig, Mix)> = manifest.configs().into_iter().map(|c| (c, ai)).collect();
    let mut corpus = style_corpus(n_humans, human, &configs, seed)?;
    corpus = corpus.with_manifest(manifest.clone())?;
    Ok(corpus)
}

/// Swap every occurrence of the positive adjectives of the first `k` pairs
/// for their negative partners.
pub fn swap_adjectives(text: &str, k: usize) -> String {
    let swap: Vec<(&str, &str)> = POLARITY_PAIRS.iter().take(k).copied().collect();
    swap_words(text, &swap)
}

fn swap_words(text: &str, swap: &[(&str, &str)]) -> String {
    text.split(' ')
        .map(|w| {
            let (stem, dot) = match w.strip_suffix('.') {
                Some(s) => (s, "."),
                None => (w, ""),
            };
            match swap.iter().find(|(p, _)| *p == stem) {
                Some((_, n)) => format!("{n}{dot}"),
                None => w.to_string(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Human text with `n_adj` distinct positive adjectives interleaved with
/// plain sentences. Returns the text and its adjectives in order.
fn polarity_document(rng: &mut ChaCha8Rng) -> (String, Vec<usize>) {
    let n_adj = rng.gen_range(3..7);
    let mut adjs: Vec<usize> = (0..POLARITY_PAIRS.len()).collect();
    adjs.shuffle(rng);
    adjs.truncate(n_adj);
    let mut sentences = Vec::new();
    for &a in &adjs {
        let subj = *SUBJECTS.choose(rng).unwrap();
        let obj = *OBJECTS.choose(rng).unwrap();
        let (_, third, _) = *VERBS.choose(rng).unwrap();
        let adj = POLARITY_PAIRS[a].0;
        sentences.push(if rng.gen_bool(0.5) {
            format!("The {subj} is {adj}.")
        } else {
            format!("The {obj} are {adj}.")
        });
        if rng.gen_bool(0.5) {
            sentences.push(format!("The {subj} {third} the {obj}."));
        }
    }
    (sentences.join(" "), adjs)
}

/// Denominator of the swap levels accepted by [`polarity_corpus`].
pub const POLARITY_LEVELS: usize = 6;

/// One model and dataset, one prompt per entry of `levels`. For level `k`
/// each AI text is its human counterpart with the first `k/6` of its
/// adjectives (rounded half up) flipped to their negative partners, so only
/// sentiment polarity differs between the two sides.
pub fn polarity_corpus(n_humans: usize, levels: &[usize], seed: u64) -> Result<Corpus> {
    let dataset = "synth";
    let mut rng = rng_for(seed, dataset);
    let docs: Vec<(String, Vec<usize>)> = (0..n_humans).map(|_| polarity_document(&mut rng)).collect();
    if let Some(k) = levels.iter().find(|&&k| k > POLARITY_LEVELS) {
        return Err(crate::error::Error::Argument(format!("swap level {k} exceeds {POLARITY_LEVELS}")));
    }
    let prompts: Vec<PromptStrategy> = PromptStrategy::ALL.iter().copied().take(levels.len()).collect();
    let mut records: Vec<TextRecord> = docs
        .iter()
        .enumerate()
        .map(|(i, (t, _))| TextRecord::human(format!("{dataset}-h{i:05}"), dataset, t.clone()))
        .collect();
    for (&p, &k) in prompts.iter().zip(levels) {
        let c = GenerationConfig::new(p, "synth-model", dataset);
        for (i, (text, adjs)) in docs.iter().enumerate() {
            let m = (k * adjs.len() + POLARITY_LEVELS / 2) / POLARITY_LEVELS;
            let swap: Vec<(&str, &str)> = adjs.iter().take(m).map(|&a| POLARITY_PAIRS[a]).collect();
            let id = format!("{}-a{i:05}", c.id());
            records.push(TextRecord::ai(id, &c, format!("{dataset}-h{i:05}"), swap_words(text, &swap)));
        }
    }
    let manifest = Manifest {
        prompts,
        models: vec!["synth-model".into()],
        datasets: vec![dataset.into()],
    };
    finish(records, manifest, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;

    #[test]
    fn swaps_whole_words_only() {
        assert_eq!(swap_adjectives("The team is superb. The plans are nice.", 1), "The team is insane. The plans are nice.");
        assert_eq!(swap_adjectives("The team is nice.", 8), "The team is grim.");
        assert_eq!(swap_adjectives("superbly", 8), "superbly");
    }

    #[test]
    fn pairs_match_in_length() {
        for (a, b) in POLARITY_PAIRS {
            assert_eq!(a.len(), b.len(), "{a}/{b}");
        }
    }

    #[test]
    fn marker_corpus_shape() {
        let c = marker_corpus(12, &Marker::ALL, 5).unwrap();
        assert_eq!(c.human_count(), 12);
        assert_eq!(c.pair_count(), 72);
        assert_eq!(c.manifest().prompts.len(), 6);
        let again = marker_corpus(12, &Marker::ALL, 5).unwrap();
        assert_eq!(c.records(), again.records());
    }

    #[test]
    fn markers_show_in_text() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let past = document(&mut rng, &Mix::only(Marker::Past), 3);
        assert!(past.contains("ed "), "{past}");
        let we = document(&mut rng, &Mix::only(Marker::We), 3);
        assert!(we.contains("We ") || we.contains(" us"), "{we}");
        let plain = document(&mut rng, &Mix::plain(), 4);
        assert!(!plain.contains(" will ") && !plain.contains("We "));
    }

    #[test]
    fn polarity_corpus_pairs() {
        let c = polarity_corpus(10, &[1, 2, 3, 4, 5, 6], 2).unwrap();
        assert_eq!(c.pair_count(), 60);
        for r in c.records().iter().filter(|r| r.label == Label::Ai) {
            let h = c.get(r.pair_id.as_deref().unwrap()).unwrap();
            assert_eq!(h.text.len(), r.text.len());
        }
    }
}
