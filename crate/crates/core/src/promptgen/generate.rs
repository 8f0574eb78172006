use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::backend::{complete_with_retry, GenParams, GenerationBackend, RetryPolicy};
use super::refine::{run_self_refine, RefineConfig};
use super::TemplateSet;
use crate::corpus::{parse_records, stable_hash, write_records, Corpus, GenerationConfig, Label, Manifest, PromptStrategy, Split, SplitSet, TextRecord};
use crate::error::{Error, Result};

pub const LEDGER_FILE: &str = "ledger.jsonl";
pub const OUTPUTS_FILE: &str = "outputs.jsonl";

/// One (human record, strategy, model) generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub record_id: String,
    pub config: GenerationConfig,
}

impl Cell {
    pub fn key(&self) -> String {
        cell_key(&self.record_id, self.config.prompt, &self.config.model)
    }

    pub fn output_id(&self) -> String {
        format!("{}.{}.{}", self.record_id, self.config.prompt, self.config.model)
    }
}

pub fn cell_key(record_id: &str, strategy: PromptStrategy, model: &str) -> String {
    format!("{record_id}|{strategy}|{model}")
}

/// Every cell, record-major in corpus order.
pub fn plan_cells(human: &Corpus, strategies: &[PromptStrategy], models: &[String]) -> Vec<Cell> {
    let mut out = Vec::with_capacity(human.human_count() * strategies.len() * models.len());
    for r in human.records().iter().filter(|r| r.label == Label::Human) {
        for &s in strategies {
            for m in models {
                out.push(Cell {
                    record_id: r.id.clone(),
                    config: GenerationConfig::new(s, m.clone(), r.dataset.clone()),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerStatus {
    Done,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub key: String,
    pub status: LedgerStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    /// Holds `ledger.jsonl` and `outputs.jsonl`.
    pub out_dir: PathBuf,
    /// Discard an existing ledger instead of resuming.
    pub reset: bool,
    pub seed: u64,
    pub workers: usize,
    pub max_iters: usize,
    pub retry: RetryPolicy,
    /// Sampling parameters; `model` is overwritten per cell.
    pub params: GenParams,
}

impl GenerateOptions {
    pub fn new(out_dir: impl Into<PathBuf>, seed: u64) -> GenerateOptions {
        GenerateOptions {
            out_dir: out_dir.into(),
            reset: false,
            seed,
            workers: 4,
            max_iters: 3,
            retry: RetryPolicy::default(),
            params: GenParams::default(),
        }
    }
}

fn corrupt(path: &Path, line: usize, what: &str) -> Error {
    Error::Ledger(format!(
        "{} line {line}: {what}; refusing to resume (rerun with reset)",
        path.display()
    ))
}

/// Finished outputs by id, checked against the ledger.
fn load_state(ledger: &Path, outputs: &Path) -> Result<HashMap<String, TextRecord>> {
    let mut done: BTreeMap<String, String> = BTreeMap::new();
    if ledger.exists() {
        let f = File::open(ledger).map_err(|e| Error::io(ledger, e))?;
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(|e| Error::io(ledger, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let e: LedgerEntry = serde_json::from_str(&line).map_err(|e| corrupt(ledger, i + 1, &e.to_string()))?;
            match (e.status, e.output_id) {
                (LedgerStatus::Done, Some(id)) => {
                    done.insert(e.key, id);
                }
                (LedgerStatus::Done, None) => return Err(corrupt(ledger, i + 1, "done entry without output id")),
                (LedgerStatus::Failed, _) => {}
            }
        }
    }
    let mut records = HashMap::new();
    if outputs.exists() {
        let f = File::open(outputs).map_err(|e| Error::io(outputs, e))?;
        let recs = parse_records(BufReader::new(f)).map_err(|e| Error::Ledger(format!("{}: {e}", outputs.display())))?;
        for r in recs {
            records.insert(r.id.clone(), r);
        }
    }
    let mut out = HashMap::new();
    for (key, id) in done {
        let r = records.remove(&id).ok_or_else(|| {
            Error::Ledger(format!(
                "ledger marks {key} done but output {id} is missing; refusing to resume (rerun with reset)"
            ))
        })?;
        out.insert(key, r);
    }
    Ok(out)
}

struct Sink {
    ledger: File,
    outputs: File,
}

impl Sink {
    fn open(ledger: &Path, outputs: &Path) -> Result<Sink> {
        let open = |p: &Path| {
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| Error::io(p, e))
        };
        Ok(Sink {
            ledger: open(ledger)?,
            outputs: open(outputs)?,
        })
    }

    /// Output first, so a done entry always has its record on disk.
    fn record(&mut self, entry: &LedgerEntry, output: Option<&TextRecord>) -> std::io::Result<()> {
        if let Some(r) = output {
            let mut buf = Vec::new();
            write_records(std::slice::from_ref(r), &mut buf)?;
            self.outputs.write_all(&buf)?;
            self.outputs.flush()?;
        }
        let mut line = serde_json::to_vec(entry)?;
        line.push(b'\n');
        self.ledger.write_all(&line)?;
        self.ledger.flush()
    }
}

/// Human examples for a cell: other train-split texts of the same dataset.
fn pick_examples<'a>(human: &'a Corpus, record: &TextRecord, k: usize, seed: u64) -> Result<Vec<&'a TextRecord>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let split = human.splits().map(|_| Split::Train);
    let mut pool: Vec<&TextRecord> = human
        .humans(&record.dataset, split)
        .into_iter()
        .filter(|r| r.id != record.id)
        .collect();
    pool.sort_by(|a, b| a.id.cmp(&b.id));
    if pool.len() < k {
        return Err(Error::Argument(format!(
            "dataset {} has {} candidate examples, {k} needed",
            record.dataset,
            pool.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(pool.choose_multiple(&mut rng, k).copied().collect())
}

fn run_cell(
    backend: &dyn GenerationBackend,
    templates: &TemplateSet,
    human: &Corpus,
    cell: &Cell,
    opts: &GenerateOptions,
) -> Result<TextRecord> {
    let record = human
        .get(&cell.record_id)
        .ok_or_else(|| Error::Integrity(format!("record {} vanished", cell.record_id)))?;
    let params = GenParams {
        model: cell.config.model.clone(),
        ..opts.params.clone()
    };
    let strategy = cell.config.prompt;
    let mut extra = serde_json::Map::new();
    let text = if strategy == PromptStrategy::SelfRefine {
        let cfg = RefineConfig {
            max_iters: opts.max_iters,
            params,
            retry: opts.retry,
        };
        let (text, state) = run_self_refine(backend, templates, record, &cfg)?;
        extra.insert("refine_iterations".into(), Value::from(state.iteration));
        text
    } else {
        let examples = pick_examples(human, record, strategy.example_count(), opts.seed ^ stable_hash(&cell.key()))?;
        let prompt = templates.render(strategy, record, &examples)?;
        complete_with_retry(backend, &prompt, &params, opts.retry)?
    };
    let mut out = TextRecord::ai(cell.output_id(), &cell.config, &record.id, text);
    out.extra = extra;
    Ok(out)
}

/// One AI record per (human record, strategy, model), paired with its human
/// counterpart. Finished cells are logged to an append-only ledger in
/// `opts.out_dir`, so an interrupted run resumes where it stopped.
pub fn generate_corpus(
    backend: &dyn GenerationBackend,
    templates: &TemplateSet,
    human: &Corpus,
    strategies: &[PromptStrategy],
    models: &[String],
    opts: &GenerateOptions,
) -> Result<Corpus> {
    if human.records().iter().any(|r| r.label != Label::Human) {
        return Err(Error::Argument("generation input must contain human records only".into()));
    }
    if strategies.is_empty() || models.is_empty() {
        return Err(Error::Argument("need at least one strategy and one model".into()));
    }
    fs::create_dir_all(&opts.out_dir).map_err(|e| Error::io(&opts.out_dir, e))?;
    let ledger = opts.out_dir.join(LEDGER_FILE);
    let outputs = opts.out_dir.join(OUTPUTS_FILE);
    if opts.reset {
        for p in [&ledger, &outputs] {
            if p.exists() {
                fs::remove_file(p).map_err(|e| Error::io(p, e))?;
            }
        }
    }
    let mut finished = load_state(&ledger, &outputs)?;
    let cells = plan_cells(human, strategies, models);
    let pending: Vec<&Cell> = cells.iter().filter(|c| !finished.contains_key(&c.key())).collect();

    let sink = Mutex::new(Sink::open(&ledger, &outputs)?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<(String, Result<TextRecord>)> = pool.install(|| {
        pending
            .par_iter()
            .map(|cell| {
                let res = run_cell(backend, templates, human, cell, opts);
                let entry = match &res {
                    Ok(r) => LedgerEntry {
                        key: cell.key(),
                        status: LedgerStatus::Done,
                        output_id: Some(r.id.clone()),
                        error: None,
                    },
                    Err(e) => LedgerEntry {
                        key: cell.key(),
                        status: LedgerStatus::Failed,
                        output_id: None,
                        error: Some(e.to_string()),
                    },
                };
                let written = sink
                    .lock()
                    .unwrap()
                    .record(&entry, res.as_ref().ok())
                    .map_err(|e| Error::io(&ledger, e));
                (cell.key(), written.and(res))
            })
            .collect()
    });

    let mut failures = Vec::new();
    for (key, res) in results {
        match res {
            Ok(r) => {
                finished.insert(key, r);
            }
            Err(e) => failures.push((key, e)),
        }
    }
    if let Some((key, first)) = failures.into_iter().next() {
        let n = cells.len() - finished.len();
        return Err(match first {
            Error::Backend(b) => Error::Backend(match b {
                super::BackendError::Transient(m) => {
                    super::BackendError::Transient(format!("{n} cells failed, first {key}: {m}"))
                }
                super::BackendError::Fatal(m) => super::BackendError::Fatal(format!("{n} cells failed, first {key}: {m}")),
            }),
            other => other,
        });
    }

    let mut records: Vec<TextRecord> = human.records().to_vec();
    for c in &cells {
        records.push(finished.remove(&c.key()).expect("every cell finished"));
    }
    let manifest = Manifest {
        prompts: strategies.to_vec(),
        models: models.to_vec(),
        datasets: human.manifest().datasets.clone(),
    };
    let corpus = Corpus::new(records, manifest)?;
    match human.splits() {
        None => Ok(corpus),
        Some(s) => {
            let mut splits = SplitSet {
                seed: s.seed,
                train: Vec::new(),
                validation: Vec::new(),
                test: Vec::new(),
            };
            for r in corpus.records() {
                let owner = r.pair_id.as_deref().unwrap_or(&r.id);
                match human.split_of(owner) {
                    Some(Split::Train) => splits.train.push(r.id.clone()),
                    Some(Split::Validation) => splits.validation.push(r.id.clone()),
                    Some(Split::Test) => splits.test.push(r.id.clone()),
                    None => return Err(Error::Integrity(format!("record {owner} has no split"))),
                }
            }
            corpus.with_splits(splits)
        }
    }
}
