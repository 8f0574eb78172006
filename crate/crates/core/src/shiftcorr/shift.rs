use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{Corpus, GenerationConfig, Label};
use crate::error::{Error, Result};
use crate::evalharness::{AccuracyMatrix, Axis};
use crate::features::{document_profile, mean_profile, Basis, FeatureId, FeatureProfile, N_FEATURES};
use crate::textproc::Annotator;

/// Per-feature `human - ai`; not-applicable on either side stays so.
pub fn feature_difference(human: &FeatureProfile, ai: &FeatureProfile) -> Result<Vec<Option<f64>>> {
    if human.values.len() != N_FEATURES || ai.values.len() != N_FEATURES {
        return Err(Error::Argument(format!(
            "profiles have {} and {} values; the registry has {N_FEATURES}",
            human.values.len(),
            ai.values.len()
        )));
    }
    Ok(human
        .values
        .iter()
        .zip(&ai.values)
        .map(|(h, a)| Some(h.as_ref()? - a.as_ref()?))
        .collect())
}

/// Train-config difference minus test-config difference.
pub fn feature_shift(train_diff: Option<f64>, test_diff: Option<f64>) -> Option<f64> {
    Some(train_diff? - test_diff?)
}

/// Shifts of one feature over the cells of an accuracy matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureShiftMatrix {
    pub feature: FeatureId,
    pub axis: Axis,
    pub train_configs: Vec<GenerationConfig>,
    pub test_configs: Vec<GenerationConfig>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl FeatureShiftMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.train_configs.len(), self.test_configs.len())
    }

    pub fn flatten(&self) -> Vec<Option<f64>> {
        self.values.iter().flatten().copied().collect()
    }
}

/// Corpus-mean profiles: human texts per dataset, AI texts per config.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProfileTable {
    pub human: BTreeMap<String, FeatureProfile>,
    pub ai: BTreeMap<GenerationConfig, FeatureProfile>,
}

impl ProfileTable {
    /// Profile every record once, then average per dataset and per config
    /// in corpus order.
    pub fn from_corpus(corpus: &Corpus, annotator: &Annotator<'_>) -> Result<ProfileTable> {
        let profiles: Vec<FeatureProfile> = corpus
            .records()
            .par_iter()
            .map(|r| document_profile(&annotator.annotate(&r.text)))
            .collect();
        let mut human: BTreeMap<String, Vec<&FeatureProfile>> = BTreeMap::new();
        let mut ai: BTreeMap<GenerationConfig, Vec<&FeatureProfile>> = BTreeMap::new();
        for (r, p) in corpus.records().iter().zip(&profiles) {
            match (r.label, r.config()) {
                (Label::Human, _) => human.entry(r.dataset.clone()).or_default().push(p),
                (Label::Ai, Some(c)) => ai.entry(c).or_default().push(p),
                (Label::Ai, None) => return Err(Error::Integrity(format!("AI record {} has no config", r.id))),
            }
        }
        let mut out = ProfileTable::default();
        for (d, ps) in human {
            out.human.insert(d, mean_profile(ps)?);
        }
        for (c, ps) in ai {
            out.ai.insert(c, mean_profile(ps)?);
        }
        Ok(out)
    }

    /// Per-feature `f(human) - f(ai)` for a config.
    pub fn difference(&self, config: &GenerationConfig) -> Result<Vec<Option<f64>>> {
        let h = self
            .human
            .get(&config.dataset)
            .ok_or_else(|| Error::Integrity(format!("no human profile for dataset {}", config.dataset)))?;
        let a = self
            .ai
            .get(config)
            .ok_or_else(|| Error::Integrity(format!("no AI profile for {config}")))?;
        feature_difference(h, a)
    }

    /// Configs of `acc` that lack a profile on either side.
    pub fn missing(&self, acc: &AccuracyMatrix) -> Vec<String> {
        let mut out: Vec<String> = acc
            .train_configs
            .iter()
            .chain(&acc.test_configs)
            .filter(|c| !self.human.contains_key(&c.dataset) || !self.ai.contains_key(c))
            .map(GenerationConfig::id)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Shift matrices for every feature over the cells of `acc`.
    pub fn shift_matrices(&self, acc: &AccuracyMatrix) -> Result<Vec<FeatureShiftMatrix>> {
        let rows: Vec<Vec<Option<f64>>> = acc.train_configs.iter().map(|c| self.difference(c)).collect::<Result<_>>()?;
        let cols: Vec<Vec<Option<f64>>> = acc.test_configs.iter().map(|c| self.difference(c)).collect::<Result<_>>()?;
        Ok(FeatureId::all()
            .map(|f| {
                let k = f.index();
                FeatureShiftMatrix {
                    feature: f,
                    axis: acc.axis,
                    train_configs: acc.train_configs.clone(),
                    test_configs: acc.test_configs.clone(),
                    values: rows
                        .iter()
                        .map(|r| cols.iter().map(|c| feature_shift(r[k], c[k])).collect())
                        .collect(),
                }
            })
            .collect())
    }

    /// CSV with columns `side,key,n_docs` then one per feature key. Empty
    /// cells are not-applicable.
    pub fn write_csv(&self, header: &[String], mut w: impl Write) -> std::io::Result<()> {
        for h in header {
            writeln!(w, "# {h}")?;
        }
        let mut out = csv::Writer::from_writer(&mut w);
        let mut head = vec!["side".to_string(), "key".to_string(), "n_docs".to_string()];
        head.extend(FeatureId::all().map(|f| f.key().to_string()));
        out.write_record(&head)?;
        let rows = self
            .human
            .iter()
            .map(|(d, p)| ("human", d.clone(), p))
            .chain(self.ai.iter().map(|(c, p)| ("ai", c.id(), p)));
        for (side, key, p) in rows {
            let mut rec = vec![side.to_string(), key, p.n_docs.to_string()];
            rec.extend(p.values.iter().map(|v| v.map_or(String::new(), |x| x.to_string())));
            out.write_record(&rec)?;
        }
        out.flush()
    }

    pub fn emit_csv(&self, header: &[String], path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut buf = Vec::new();
        self.write_csv(header, &mut buf).map_err(|e| Error::io(path, e))?;
        fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    pub fn parse_csv(text: &str) -> Result<ProfileTable> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let head = reader
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let expected: Vec<&str> = ["side", "key", "n_docs"]
            .into_iter()
            .chain(FeatureId::all().map(FeatureId::key))
            .collect();
        if head.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Integrity("profile CSV columns do not match the feature registry".into()));
        }
        let mut out = ProfileTable::default();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let bad = |m: String| Error::Parse { line, message: m };
            let n_docs: usize = rec[2].parse().map_err(|_| bad(format!("bad n_docs {:?}", &rec[2])))?;
            let values: Vec<Option<f64>> = (3..rec.len())
                .map(|i| {
                    let s = rec[i].trim();
                    if s.is_empty() {
                        Ok(None)
                    } else {
                        s.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .map(Some)
                            .ok_or_else(|| bad(format!("bad value {s:?} for {}", &head[i])))
                    }
                })
                .collect::<Result<_>>()?;
            let n_applicable = values.iter().map(|v| if v.is_some() { n_docs } else { 0 }).collect();
            let p = FeatureProfile {
                values,
                basis: Basis::CorpusMean,
                n_docs,
                n_applicable,
            };
            match &rec[0] {
                "human" => {
                    out.human.insert(rec[1].to_string(), p);
                }
                "ai" => {
                    let c: GenerationConfig = rec[1].parse().map_err(|_| bad(format!("bad config id {:?}", &rec[1])))?;
                    out.ai.insert(c, p);
                }
                other => return Err(bad(format!("unknown side {other:?}"))),
            }
        }
        Ok(out)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<ProfileTable> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ProfileTable::parse_csv(&text)
    }
}
