//! Texts, generation configurations, pairing and deterministic splits.
//!
//! A [`Corpus`] is immutable once built: every mutation (`filter_min_length`,
//! `with_splits`, ...) returns a new corpus that has been re-validated.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// The six prompting strategies used to produce AI texts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PromptStrategy {
    ZeroShot,
    ThreeShot,
    Style,
    ZeroShotCot,
    OneShotCot,
    SelfRefine,
}

impl PromptStrategy {
    pub const ALL: [PromptStrategy; 6] = [
        PromptStrategy::ZeroShot,
        PromptStrategy::ThreeShot,
        PromptStrategy::Style,
        PromptStrategy::ZeroShotCot,
        PromptStrategy::OneShotCot,
        PromptStrategy::SelfRefine,
    ];

    /// Canonical key used in JSONL records and config ids.
    pub fn key(self) -> &'static str {
        match self {
            PromptStrategy::ZeroShot => "0-shot",
            PromptStrategy::ThreeShot => "3-shot",
            PromptStrategy::Style => "style",
            PromptStrategy::ZeroShotCot => "0-shot-cot",
            PromptStrategy::OneShotCot => "1-shot-cot",
            PromptStrategy::SelfRefine => "self-refine",
        }
    }

    /// Number of human-written examples embedded in the prompt.
    pub fn example_count(self) -> usize {
        match self {
            PromptStrategy::ThreeShot => 3,
            PromptStrategy::Style | PromptStrategy::OneShotCot => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for PromptStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for PromptStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "0-shot" | "zero-shot" => PromptStrategy::ZeroShot,
            "3-shot" | "three-shot" => PromptStrategy::ThreeShot,
            "style" => PromptStrategy::Style,
            "0-shot-cot" | "zero-shot-cot" => PromptStrategy::ZeroShotCot,
            "1-shot-cot" | "one-shot-cot" => PromptStrategy::OneShotCot,
            "self-refine" => PromptStrategy::SelfRefine,
            _ => return Err(Error::Argument(format!("unknown prompt strategy {s:?}"))),
        })
    }
}

impl Serialize for PromptStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.key())
    }
}

impl<'de> Deserialize<'de> for PromptStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Human,
    Ai,
}

/// One (prompt, generator model, dataset) cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenerationConfig {
    pub prompt: PromptStrategy,
    pub model: String,
    pub dataset: String,
}

impl GenerationConfig {
    pub fn new(prompt: PromptStrategy, model: impl Into<String>, dataset: impl Into<String>) -> Self {
        GenerationConfig {
            prompt,
            model: model.into(),
            dataset: dataset.into(),
        }
    }

    /// `prompt/model/dataset`, the id used in CSV headers.
    pub fn id(&self) -> String {
        format!("{}/{}/{}", self.prompt, self.model, self.dataset)
    }
}

impl fmt::Display for GenerationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for GenerationConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split('/').collect();
        match parts.as_slice() {
            [p, m, d] if !m.is_empty() && !d.is_empty() => Ok(GenerationConfig::new(p.parse()?, *m, *d)),
            _ => Err(Error::Argument(format!("config id {s:?} is not prompt/model/dataset"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextRecord {
    pub id: String,
    pub text: String,
    pub label: Label,
    pub dataset: String,
    pub model: Option<String>,
    pub prompt: Option<PromptStrategy>,
    /// Id of the human counterpart; present exactly on AI records.
    pub pair_id: Option<String>,
    /// Length in Unicode scalar values.
    pub char_len: usize,
    /// Unknown JSONL keys, carried through untouched.
    pub extra: Map<String, Value>,
}

impl TextRecord {
    pub fn human(id: impl Into<String>, dataset: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        TextRecord {
            id: id.into(),
            char_len: text.chars().count(),
            text,
            label: Label::Human,
            dataset: dataset.into(),
            model: None,
            prompt: None,
            pair_id: None,
            extra: Map::new(),
        }
    }

    pub fn ai(
        id: impl Into<String>,
        config: &GenerationConfig,
        pair_id: impl Into<String>,
        text: impl Into<String>,
    ) -> Self {
        let text = text.into();
        TextRecord {
            id: id.into(),
            char_len: text.chars().count(),
            text,
            label: Label::Ai,
            dataset: config.dataset.clone(),
            model: Some(config.model.clone()),
            prompt: Some(config.prompt),
            pair_id: Some(pair_id.into()),
            extra: Map::new(),
        }
    }

    /// Replace the text, keeping `char_len` in sync.
    pub fn set_text(&mut self, text: String) {
        self.char_len = text.chars().count();
        self.text = text;
    }

    pub fn config(&self) -> Option<GenerationConfig> {
        match (&self.prompt, &self.model) {
            (Some(p), Some(m)) => Some(GenerationConfig::new(*p, m.clone(), self.dataset.clone())),
            _ => None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.char_len != self.text.chars().count() {
            return Err(Error::Integrity(format!("record {}: char_len out of sync", self.id)));
        }
        match self.label {
            Label::Ai => {
                if self.pair_id.is_none() || self.model.is_none() || self.prompt.is_none() {
                    return Err(Error::Integrity(format!(
                        "AI record {} must carry model, prompt and pair_id",
                        self.id
                    )));
                }
            }
            Label::Human => {
                if self.model.is_some() || self.prompt.is_some() || self.pair_id.is_some() {
                    return Err(Error::Integrity(format!(
                        "human record {} must not carry model, prompt or pair_id",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Wire form of one JSONL line.
#[derive(Serialize, Deserialize)]
struct RecordLine {
    id: String,
    text: String,
    label: Label,
    dataset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prompt: Option<PromptStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pair_id: Option<String>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

impl From<RecordLine> for TextRecord {
    fn from(l: RecordLine) -> Self {
        TextRecord {
            id: l.id,
            char_len: l.text.chars().count(),
            text: l.text,
            label: l.label,
            dataset: l.dataset,
            model: l.model,
            prompt: l.prompt,
            pair_id: l.pair_id,
            extra: l.extra,
        }
    }
}

impl From<&TextRecord> for RecordLine {
    fn from(r: &TextRecord) -> Self {
        RecordLine {
            id: r.id.clone(),
            text: r.text.clone(),
            label: r.label,
            dataset: r.dataset.clone(),
            model: r.model.clone(),
            prompt: r.prompt,
            pair_id: r.pair_id.clone(),
            extra: r.extra.clone(),
        }
    }
}

/// Registered prompt, model and dataset sets for a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub prompts: Vec<PromptStrategy>,
    pub models: Vec<String>,
    pub datasets: Vec<String>,
}

impl Manifest {
    /// The full 6 prompt x 7 model x 4 dataset grid.
    pub fn full() -> Self {
        Manifest {
            prompts: PromptStrategy::ALL.to_vec(),
            models: [
                "mistral-123b",
                "deepseek-70b",
                "llama-70b",
                "qwen-72b",
                "qwen-32b",
                "qwen-14b",
                "solar-22b",
            ]
            .map(String::from)
            .to_vec(),
            datasets: ["abstracts", "news", "reviews", "qa"].map(String::from).to_vec(),
        }
    }

    /// Smallest manifest covering every record, in first-seen order.
    pub fn from_records(records: &[TextRecord]) -> Self {
        let mut m = Manifest {
            prompts: Vec::new(),
            models: Vec::new(),
            datasets: Vec::new(),
        };
        for r in records {
            push_unique(&mut m.datasets, &r.dataset);
            if let Some(model) = &r.model {
                push_unique(&mut m.models, model);
            }
            if let Some(p) = r.prompt {
                if !m.prompts.contains(&p) {
                    m.prompts.push(p);
                }
            }
        }
        m.prompts.sort();
        m
    }

    pub fn contains(&self, config: &GenerationConfig) -> bool {
        self.prompts.contains(&config.prompt)
            && self.models.contains(&config.model)
            && self.datasets.contains(&config.dataset)
    }

    /// Every registered config, prompt-major then model then dataset.
    pub fn configs(&self) -> Vec<GenerationConfig> {
        let mut out = Vec::new();
        for p in &self.prompts {
            for m in &self.models {
                for d in &self.datasets {
                    out.push(GenerationConfig::new(*p, m.clone(), d.clone()));
                }
            }
        }
        out
    }
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn key(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl FromStr for Split {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "validation" | "val" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            _ => Err(Error::Argument(format!("unknown split {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Human,
    Ai,
    Both,
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(Side::Human),
            "ai" => Ok(Side::Ai),
            "both" => Ok(Side::Both),
            _ => Err(Error::Argument(format!("unknown side {s:?}"))),
        }
    }
}

/// Train/validation/test id lists. Serializes to the split manifest JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSet {
    pub seed: u64,
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

impl SplitSet {
    pub fn ids(&self, split: Split) -> &[String] {
        match split {
            Split::Train => &self.train,
            Split::Validation => &self.validation,
            Split::Test => &self.test,
        }
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.validation.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn assignment(&self) -> HashMap<String, Split> {
        let mut m = HashMap::with_capacity(self.len());
        for s in Split::ALL {
            for id in self.ids(s) {
                m.insert(id.clone(), s);
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    records: Vec<TextRecord>,
    index: HashMap<String, usize>,
    manifest: Manifest,
    splits: Option<SplitSet>,
    assignment: HashMap<String, Split>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records && self.manifest == other.manifest && self.splits == other.splits
    }
}

impl Corpus {
    /// Validate and index `records` against `manifest`.
    pub fn new(records: Vec<TextRecord>, manifest: Manifest) -> Result<Self> {
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            r.check()?;
            if index.insert(r.id.clone(), i).is_some() {
                return Err(Error::Integrity(format!("duplicate record id {}", r.id)));
            }
        }
        for r in &records {
            if !manifest.datasets.contains(&r.dataset) {
                return Err(Error::Integrity(format!(
                    "record {}: dataset {} not in manifest",
                    r.id, r.dataset
                )));
            }
            if let Some(cfg) = r.config() {
                if !manifest.contains(&cfg) {
                    return Err(Error::Integrity(format!("record {}: config {cfg} not in manifest", r.id)));
                }
            }
            if let Some(pid) = &r.pair_id {
                let ok = index
                    .get(pid)
                    .map(|&j| records[j].label == Label::Human && records[j].dataset == r.dataset)
                    .unwrap_or(false);
                if !ok {
                    return Err(Error::Integrity(format!(
                        "record {}: pair_id {pid} does not resolve to a human record of dataset {}",
                        r.id, r.dataset
                    )));
                }
            }
        }
        Ok(Corpus {
            records,
            index,
            manifest,
            splits: None,
            assignment: HashMap::new(),
        })
    }

    /// Build with a manifest inferred from the records.
    pub fn from_records(records: Vec<TextRecord>) -> Result<Self> {
        let manifest = Manifest::from_records(&records);
        Corpus::new(records, manifest)
    }

    pub fn records(&self) -> &[TextRecord] {
        &self.records
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn splits(&self) -> Option<&SplitSet> {
        self.splits.as_ref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&TextRecord> {
        self.index.get(id).map(|&i| &self.records[i])
    }

    pub fn split_of(&self, id: &str) -> Option<Split> {
        self.assignment.get(id).copied()
    }

    pub fn human_count(&self) -> usize {
        self.records.iter().filter(|r| r.label == Label::Human).count()
    }

    pub fn pair_count(&self) -> usize {
        self.records.iter().filter(|r| r.pair_id.is_some()).count()
    }

    pub fn into_records(self) -> Vec<TextRecord> {
        self.records
    }

    /// Attach a split set; it must partition the corpus and keep every AI
    /// record in its counterpart's split.
    pub fn with_splits(mut self, splits: SplitSet) -> Result<Self> {
        let assignment = splits.assignment();
        if assignment.len() != splits.len() {
            return Err(Error::Integrity("split lists overlap".into()));
        }
        if assignment.len() != self.records.len() {
            return Err(Error::Integrity(format!(
                "split set covers {} ids but the corpus has {} records",
                assignment.len(),
                self.records.len()
            )));
        }
        for r in &self.records {
            let s = assignment
                .get(&r.id)
                .ok_or_else(|| Error::Integrity(format!("record {} missing from split set", r.id)))?;
            if let Some(pid) = &r.pair_id {
                if assignment.get(pid) != Some(s) {
                    return Err(Error::Integrity(format!(
                        "AI record {} is not in the split of its counterpart {pid}",
                        r.id
                    )));
                }
            }
        }
        self.assignment = assignment;
        self.splits = Some(splits);
        Ok(self)
    }

    /// Records matching `(config, split, side)`. Human records match on the
    /// dataset alone.
    pub fn select(&self, config: &GenerationConfig, split: Split, side: Side) -> Result<Vec<&TextRecord>> {
        if !self.manifest.contains(config) {
            return Err(Error::Argument(format!("config {config} not registered")));
        }
        if self.splits.is_none() {
            return Err(Error::Argument("corpus has no split assignment".into()));
        }
        Ok(self
            .records
            .iter()
            .filter(|r| self.split_of(&r.id) == Some(split))
            .filter(|r| match r.label {
                Label::Human => side != Side::Ai && r.dataset == config.dataset,
                Label::Ai => side != Side::Human && r.config().as_ref() == Some(config),
            })
            .collect())
    }

    /// Human records of one dataset in one split.
    pub fn humans(&self, dataset: &str, split: Option<Split>) -> Vec<&TextRecord> {
        self.records
            .iter()
            .filter(|r| r.label == Label::Human && r.dataset == dataset)
            .filter(|r| split.map_or(true, |s| self.split_of(&r.id) == Some(s)))
            .collect()
    }

    /// AI records of one config, optionally restricted to a split.
    pub fn generated(&self, config: &GenerationConfig, split: Option<Split>) -> Vec<&TextRecord> {
        self.records
            .iter()
            .filter(|r| r.label == Label::Ai && r.config().as_ref() == Some(config))
            .filter(|r| split.map_or(true, |s| self.split_of(&r.id) == Some(s)))
            .collect()
    }

    /// Keep records of `dataset` with at least `min_chars` characters. AI
    /// records whose counterpart is removed go with it; other datasets are
    /// untouched.
    pub fn filter_min_length(&self, dataset: &str, min_chars: usize) -> Result<Corpus> {
        if !self.manifest.datasets.iter().any(|d| d == dataset) {
            return Err(Error::Argument(format!("unknown dataset {dataset:?}")));
        }
        let removed: HashSet<&str> = self
            .records
            .iter()
            .filter(|r| r.dataset == dataset && r.char_len < min_chars)
            .map(|r| r.id.as_str())
            .collect();
        let keep = |r: &TextRecord| {
            !removed.contains(r.id.as_str())
                && r.pair_id.as_deref().map_or(true, |p| !removed.contains(p))
        };
        self.retain(keep)
    }

    /// The `k` longest human records of `dataset` (ties broken by id) plus
    /// their AI counterparts; other datasets are untouched.
    pub fn top_k_longest(&self, dataset: &str, k: usize) -> Result<Corpus> {
        if !self.manifest.datasets.iter().any(|d| d == dataset) {
            return Err(Error::Argument(format!("unknown dataset {dataset:?}")));
        }
        let mut humans: Vec<&TextRecord> = self.humans(dataset, None);
        humans.sort_by(|a, b| b.char_len.cmp(&a.char_len).then_with(|| a.id.cmp(&b.id)));
        let kept: HashSet<&str> = humans.iter().take(k).map(|r| r.id.as_str()).collect();
        self.retain(|r| {
            r.dataset != dataset
                || kept.contains(r.id.as_str())
                || r.pair_id.as_deref().map_or(false, |p| kept.contains(p))
        })
    }

    /// New corpus holding the records that pass `keep`; splits are narrowed
    /// to the surviving ids.
    pub fn retain(&self, keep: impl Fn(&TextRecord) -> bool) -> Result<Corpus> {
        let records: Vec<TextRecord> = self.records.iter().filter(|r| keep(r)).cloned().collect();
        let corpus = Corpus::new(records, self.manifest.clone())?;
        match &self.splits {
            None => Ok(corpus),
            Some(s) => {
                let narrow = |ids: &[String]| -> Vec<String> {
                    ids.iter().filter(|id| corpus.index.contains_key(*id)).cloned().collect()
                };
                let splits = SplitSet {
                    seed: s.seed,
                    train: narrow(&s.train),
                    validation: narrow(&s.validation),
                    test: narrow(&s.test),
                };
                corpus.with_splits(splits)
            }
        }
    }

    /// Replace the manifest, re-validating every record against it.
    pub fn with_manifest(self, manifest: Manifest) -> Result<Corpus> {
        let splits = self.splits.clone();
        let c = Corpus::new(self.records, manifest)?;
        match splits {
            Some(s) => c.with_splits(s),
            None => Ok(c),
        }
    }
}

/// Split human records per dataset with ratios `(train, validation, test)`;
/// AI records follow their counterpart. Train and validation sizes are
/// floored, the remainder goes to test.
pub fn split(corpus: &Corpus, ratios: (f64, f64, f64), seed: u64) -> Result<SplitSet> {
    let (tr, va, te) = ratios;
    if [tr, va, te].iter().any(|r| !(0.0..=1.0).contains(r)) || ((tr + va + te) - 1.0).abs() > 1e-9 {
        return Err(Error::Argument(format!(
            "split ratios {ratios:?} must be fractions summing to 1"
        )));
    }
    let mut by_dataset: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for r in corpus.records() {
        if r.label == Label::Human {
            by_dataset.entry(r.dataset.as_str()).or_default().push(r.id.as_str());
        }
    }
    let mut assignment: HashMap<&str, Split> = HashMap::new();
    for (dataset, mut ids) in by_dataset {
        ids.sort_unstable();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(dataset));
        ids.shuffle(&mut rng);
        let n = ids.len() as f64;
        let n_train = (tr * n + 1e-9).floor() as usize;
        let n_val = ((va * n + 1e-9).floor() as usize).min(ids.len() - n_train);
        for (i, id) in ids.into_iter().enumerate() {
            let s = if i < n_train {
                Split::Train
            } else if i < n_train + n_val {
                Split::Validation
            } else {
                Split::Test
            };
            assignment.insert(id, s);
        }
    }
    let mut out = SplitSet {
        seed,
        train: Vec::new(),
        validation: Vec::new(),
        test: Vec::new(),
    };
    for r in corpus.records() {
        let key = r.pair_id.as_deref().unwrap_or(&r.id);
        let s = *assignment
            .get(key)
            .ok_or_else(|| Error::Integrity(format!("record {} has no human anchor", r.id)))?;
        match s {
            Split::Train => out.train.push(r.id.clone()),
            Split::Validation => out.validation.push(r.id.clone()),
            Split::Test => out.test.push(r.id.clone()),
        }
    }
    Ok(out)
}

/// FNV-1a, used to derive stable sub-seeds from names.
pub fn stable_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Read a JSONL corpus. Blank lines and `#` comment lines are skipped.
pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Corpus> {
    let records = read_records(path)?;
    Corpus::from_records(records)
}

pub fn load_jsonl_with_manifest(path: impl AsRef<Path>, manifest: Manifest) -> Result<Corpus> {
    Corpus::new(read_records(path)?, manifest)
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<TextRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_records(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_records(reader: impl BufRead) -> Result<Vec<TextRecord>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<stream>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rec: RecordLine = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if !seen.insert(rec.id.clone()) {
            return Err(Error::Integrity(format!("duplicate record id {} (line {})", rec.id, i + 1)));
        }
        out.push(rec.into());
    }
    Ok(out)
}

pub fn write_records(records: &[TextRecord], mut w: impl Write) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, &RecordLine::from(r))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Write the corpus as JSONL, optionally preceded by a `#` header line.
pub fn emit_jsonl(corpus: &Corpus, path: impl AsRef<Path>, header: Option<&str>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res = (|| {
        if let Some(h) = header {
            writeln!(w, "# {h}")?;
        }
        write_records(corpus.records(), &mut w)?;
        w.flush()
    })();
    res.map_err(|e| Error::io(path, e))
}

/// Datasets present in a record list, sorted.
pub fn datasets_of(records: &[TextRecord]) -> BTreeSet<String> {
    records.iter().map(|r| r.dataset.clone()).collect()
}
