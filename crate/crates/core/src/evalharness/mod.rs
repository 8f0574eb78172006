//! Cross-condition accuracy matrices for any [`Detector`].

pub mod detector;
mod io;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{stable_hash, Corpus, GenerationConfig, Label, Manifest, PromptStrategy, Split, TextRecord};
use crate::error::{Error, Result};

pub use detector::{Detector, FeatureDetector, GdParams, LogisticModel};
pub use io::{emit_accuracy_csv, ingest_accuracy_csv, parse_accuracy_csv, write_accuracy_csv};

/// Decision threshold on the predicted AI probability.
pub const THRESHOLD: f64 = 0.5;

/// The configuration field that varies across a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Prompt,
    Model,
    Dataset,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Prompt, Axis::Model, Axis::Dataset];

    pub fn key(self) -> &'static str {
        match self {
            Axis::Prompt => "prompt",
            Axis::Model => "model",
            Axis::Dataset => "dataset",
        }
    }

    /// The axis value of a config.
    pub fn value_of(self, c: &GenerationConfig) -> String {
        match self {
            Axis::Prompt => c.prompt.key().to_string(),
            Axis::Model => c.model.clone(),
            Axis::Dataset => c.dataset.clone(),
        }
    }

    /// Number of registered values along this axis.
    pub fn len_in(self, m: &Manifest) -> usize {
        match self {
            Axis::Prompt => m.prompts.len(),
            Axis::Model => m.models.len(),
            Axis::Dataset => m.datasets.len(),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "prompt" => Ok(Axis::Prompt),
            "model" => Ok(Axis::Model),
            "dataset" => Ok(Axis::Dataset),
            other => Err(Error::Argument(format!("unknown axis {other:?}"))),
        }
    }
}

/// Held-constant config fields, written `model=llama-70b,dataset=qa`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedDims {
    pub prompt: Option<PromptStrategy>,
    pub model: Option<String>,
    pub dataset: Option<String>,
}

impl FixedDims {
    pub fn new(prompt: Option<PromptStrategy>, model: Option<&str>, dataset: Option<&str>) -> Self {
        FixedDims {
            prompt,
            model: model.map(String::from),
            dataset: dataset.map(String::from),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.prompt.is_none() && self.model.is_none() && self.dataset.is_none()
    }
}

impl fmt::Display for FixedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(p) = self.prompt {
            parts.push(format!("prompt={p}"));
        }
        if let Some(m) = &self.model {
            parts.push(format!("model={m}"));
        }
        if let Some(d) = &self.dataset {
            parts.push(format!("dataset={d}"));
        }
        f.write_str(&parts.join(","))
    }
}

impl FromStr for FixedDims {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = FixedDims::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Argument(format!("expected key=value, got {part:?}")))?;
            let v = v.trim();
            if v.is_empty() {
                return Err(Error::Argument(format!("empty value for {k}")));
            }
            match k.trim() {
                "prompt" => out.prompt = Some(v.parse()?),
                "model" => out.model = Some(v.to_string()),
                "dataset" => out.dataset = Some(v.to_string()),
                other => return Err(Error::Argument(format!("unknown dimension {other:?}"))),
            }
        }
        Ok(out)
    }
}

impl Serialize for FixedDims {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FixedDims {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Placeholder for a dimension averaged out by [`aggregate`].
pub const AVERAGED: &str = "*";

/// Detector accuracy with rows = training config, columns = test config.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyMatrix {
    pub axis: Axis,
    pub train_configs: Vec<GenerationConfig>,
    pub test_configs: Vec<GenerationConfig>,
    pub values: Vec<Vec<f64>>,
    pub fixed: FixedDims,
    /// Fixed dims of every matrix folded into this one; a single entry
    /// (equal to `fixed`) for a matrix that was never aggregated.
    pub sources: Vec<FixedDims>,
}

impl AccuracyMatrix {
    /// Validate shape and cell range.
    pub fn new(
        axis: Axis,
        train_configs: Vec<GenerationConfig>,
        test_configs: Vec<GenerationConfig>,
        values: Vec<Vec<f64>>,
        fixed: FixedDims,
    ) -> Result<Self> {
        if values.len() != train_configs.len() {
            return Err(Error::Argument(format!(
                "{} rows for {} training configs",
                values.len(),
                train_configs.len()
            )));
        }
        for (r, row) in values.iter().enumerate() {
            if row.len() != test_configs.len() {
                return Err(Error::Argument(format!(
                    "row {r} has {} cells for {} test configs",
                    row.len(),
                    test_configs.len()
                )));
            }
            for (c, v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(v) {
                    return Err(Error::Range {
                        row: r,
                        col: c,
                        value: v.to_string(),
                    });
                }
            }
        }
        Ok(AccuracyMatrix {
            axis,
            train_configs,
            test_configs,
            values,
            sources: vec![fixed.clone()],
            fixed,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.train_configs.len(), self.test_configs.len())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row][col]
    }

    /// Axis values labelling the rows.
    pub fn row_labels(&self) -> Vec<String> {
        self.train_configs.iter().map(|c| self.axis.value_of(c)).collect()
    }

    pub fn col_labels(&self) -> Vec<String> {
        self.test_configs.iter().map(|c| self.axis.value_of(c)).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.train_configs.len().min(self.test_configs.len()))
            .map(|i| self.values[i][i])
            .collect()
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    /// Short name for the held-constant dims, e.g. `model=x,dataset=y`.
    pub fn setting(&self) -> String {
        let s = self.fixed.to_string();
        if s.is_empty() {
            "all".to_string()
        } else {
            s
        }
    }
}

/// Fraction of predictions on the correct side of the threshold.
pub fn accuracy_of(probabilities: &[f64], labels: &[Label]) -> Result<f64> {
    if probabilities.is_empty() {
        return Err(Error::Argument("accuracy of an empty record list".into()));
    }
    if probabilities.len() != labels.len() {
        return Err(Error::Argument(format!(
            "{} predictions for {} labels",
            probabilities.len(),
            labels.len()
        )));
    }
    let correct = probabilities
        .iter()
        .zip(labels)
        .filter(|(&p, &l)| (p >= THRESHOLD) == (l == Label::Ai))
        .count();
    Ok(correct as f64 / labels.len() as f64)
}

/// Accuracy of a trained model on labelled records.
pub fn accuracy<D: Detector + ?Sized>(detector: &D, model: &D::Model, records: &[&TextRecord]) -> Result<f64> {
    let probs: Vec<f64> = records.iter().map(|r| detector.predict(model, &r.text)).collect();
    let labels: Vec<Label> = records.iter().map(|r| r.label).collect();
    accuracy_of(&probs, &labels)
}

/// The configs along `axis` with the other dims taken from `fixed`. The
/// model and dataset axes hold the prompt at 0-shot unless given.
pub fn axis_configs(manifest: &Manifest, axis: Axis, fixed: &FixedDims) -> Result<Vec<GenerationConfig>> {
    let need = |v: &Option<String>, name: &str, known: &[String]| -> Result<String> {
        let v = v
            .clone()
            .ok_or_else(|| Error::Argument(format!("{axis} axis needs a fixed {name}")))?;
        if !known.contains(&v) {
            return Err(Error::Argument(format!("{name} {v:?} is not in the manifest")));
        }
        Ok(v)
    };
    let prompt = fixed.prompt.unwrap_or(PromptStrategy::ZeroShot);
    if axis != Axis::Prompt && !manifest.prompts.contains(&prompt) {
        return Err(Error::Argument(format!("prompt {prompt} is not in the manifest")));
    }
    Ok(match axis {
        Axis::Prompt => {
            let model = need(&fixed.model, "model", &manifest.models)?;
            let dataset = need(&fixed.dataset, "dataset", &manifest.datasets)?;
            manifest
                .prompts
                .iter()
                .map(|&p| GenerationConfig::new(p, model.clone(), dataset.clone()))
                .collect()
        }
        Axis::Model => {
            let dataset = need(&fixed.dataset, "dataset", &manifest.datasets)?;
            manifest
                .models
                .iter()
                .map(|m| GenerationConfig::new(prompt, m.clone(), dataset.clone()))
                .collect()
        }
        Axis::Dataset => {
            let model = need(&fixed.model, "model", &manifest.models)?;
            manifest
                .datasets
                .iter()
                .map(|d| GenerationConfig::new(prompt, model.clone(), d.clone()))
                .collect()
        }
    })
}

/// The fixed dims actually held along an axis (prompt made explicit off the
/// prompt axis).
fn effective_fixed(axis: Axis, fixed: &FixedDims) -> FixedDims {
    let prompt = fixed.prompt.unwrap_or(PromptStrategy::ZeroShot);
    match axis {
        Axis::Prompt => FixedDims::new(None, fixed.model.as_deref(), fixed.dataset.as_deref()),
        Axis::Model => FixedDims::new(Some(prompt), None, fixed.dataset.as_deref()),
        Axis::Dataset => FixedDims::new(Some(prompt), fixed.model.as_deref(), None),
    }
}

fn cell_records<'c>(corpus: &'c Corpus, config: &GenerationConfig, split: Split) -> Result<Vec<&'c TextRecord>> {
    let humans = corpus.humans(&config.dataset, Some(split));
    let ai = corpus.generated(config, Some(split));
    if humans.is_empty() || ai.is_empty() {
        return Err(Error::Integrity(format!(
            "missing cell {config} ({} split): {} human and {} AI records",
            split.key(),
            humans.len(),
            ai.len()
        )));
    }
    let mut out = humans;
    out.extend(ai);
    Ok(out)
}

/// Train on each config's train split and test on every config's test split.
pub fn cross_eval<D: Detector>(
    corpus: &Corpus,
    axis: Axis,
    fixed: &FixedDims,
    detector: &D,
    seed: u64,
) -> Result<AccuracyMatrix> {
    if corpus.splits().is_none() {
        return Err(Error::Argument("corpus has no split assignment".into()));
    }
    let configs = axis_configs(corpus.manifest(), axis, fixed)?;
    let train: Vec<Vec<&TextRecord>> = configs
        .iter()
        .map(|c| cell_records(corpus, c, Split::Train))
        .collect::<Result<_>>()?;
    let test: Vec<Vec<&TextRecord>> = configs
        .iter()
        .map(|c| cell_records(corpus, c, Split::Test))
        .collect::<Result<_>>()?;

    for (r, tr) in train.iter().enumerate() {
        let ids: HashSet<&str> = tr.iter().map(|x| x.id.as_str()).collect();
        for (c, te) in test.iter().enumerate() {
            if let Some(x) = te.iter().find(|x| ids.contains(x.id.as_str())) {
                return Err(Error::Integrity(format!(
                    "test record {} of {} appears in the training set of {}",
                    x.id, configs[c], configs[r]
                )));
            }
        }
    }

    let models: Vec<D::Model> = train
        .par_iter()
        .zip(configs.par_iter())
        .map(|(records, config)| {
            let examples: Vec<(&str, Label)> = records.iter().map(|r| (r.text.as_str(), r.label)).collect();
            detector.train(&examples, seed ^ stable_hash(&config.id()))
        })
        .collect::<Result<_>>()?;

    let n = configs.len();
    let cells: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| accuracy(detector, &models[k / n], &test[k % n]))
        .collect::<Result<_>>()?;
    let values = cells.chunks(n).map(<[f64]>::to_vec).collect();
    AccuracyMatrix::new(axis, configs.clone(), configs, values, effective_fixed(axis, fixed))
}

/// Every matrix along `axis` for the manifest, one per combination of the
/// other dims.
pub fn cross_eval_all<D: Detector>(corpus: &Corpus, axis: Axis, detector: &D, seed: u64) -> Result<Vec<AccuracyMatrix>> {
    let m = corpus.manifest();
    let mut out = Vec::new();
    match axis {
        Axis::Prompt => {
            for model in &m.models {
                for d in &m.datasets {
                    out.push(cross_eval(
                        corpus,
                        axis,
                        &FixedDims::new(None, Some(model), Some(d)),
                        detector,
                        seed,
                    )?);
                }
            }
        }
        Axis::Model => {
            for d in &m.datasets {
                out.push(cross_eval(corpus, axis, &FixedDims::new(None, None, Some(d)), detector, seed)?);
            }
        }
        Axis::Dataset => {
            for model in &m.models {
                out.push(cross_eval(corpus, axis, &FixedDims::new(None, Some(model), None), detector, seed)?);
            }
        }
    }
    Ok(out)
}

fn merge_field(values: impl Iterator<Item = String>) -> String {
    let mut it = values;
    let first = it.next().unwrap_or_default();
    if it.all(|v| v == first) {
        first
    } else {
        AVERAGED.to_string()
    }
}

fn merge_configs(matrices: &[AccuracyMatrix], pick: impl Fn(&AccuracyMatrix) -> &[GenerationConfig]) -> Vec<GenerationConfig> {
    let n = pick(&matrices[0]).len();
    (0..n)
        .map(|i| {
            let all = || matrices.iter().map(|m| &pick(m)[i]);
            GenerationConfig {
                prompt: all().next().map(|c| c.prompt).unwrap_or(PromptStrategy::ZeroShot),
                model: merge_field(all().map(|c| c.model.clone())),
                dataset: merge_field(all().map(|c| c.dataset.clone())),
            }
        })
        .collect()
}

/// Cell-wise mean of matrices sharing axis and axis-value ordering. Dims that
/// differ between inputs become `*` in the result configs.
pub fn aggregate(matrices: &[AccuracyMatrix]) -> Result<AccuracyMatrix> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::Argument("nothing to aggregate".into()))?;
    for m in &matrices[1..] {
        if m.axis != first.axis {
            return Err(Error::Argument(format!("cannot average a {} matrix with a {} matrix", first.axis, m.axis)));
        }
        if m.shape() != first.shape() {
            return Err(Error::Argument(format!(
                "shape mismatch: {:?} vs {:?}",
                first.shape(),
                m.shape()
            )));
        }
        if m.row_labels() != first.row_labels() || m.col_labels() != first.col_labels() {
            return Err(Error::Argument("matrices disagree on config ordering".into()));
        }
    }
    let (rows, cols) = first.shape();
    let k = matrices.len() as f64;
    let mut values = vec![vec![0.0; cols]; rows];
    for (r, row) in values.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            let x0 = first.values[r][c];
            *cell = if matrices.iter().all(|m| m.values[r][c] == x0) {
                x0
            } else {
                (matrices.iter().map(|m| m.values[r][c]).sum::<f64>() / k).clamp(0.0, 1.0)
            };
        }
    }
    let train_configs = merge_configs(matrices, |m| &m.train_configs);
    let test_configs = merge_configs(matrices, |m| &m.test_configs);
    let keep = |f: fn(&FixedDims) -> Option<String>| -> Option<String> {
        let v = f(&first.fixed);
        matrices.iter().all(|m| f(&m.fixed) == v).then_some(v).flatten()
    };
    let fixed = FixedDims {
        prompt: matrices
            .iter()
            .all(|m| m.fixed.prompt == first.fixed.prompt)
            .then_some(first.fixed.prompt)
            .flatten(),
        model: keep(|f| f.model.clone()),
        dataset: keep(|f| f.dataset.clone()),
    };
    let mut out = AccuracyMatrix::new(first.axis, train_configs, test_configs, values, fixed)?;
    out.sources = matrices.iter().flat_map(|m| m.sources.iter().cloned()).collect();
    Ok(out)
}

/// Names of the dims that vary across an aggregate's sources.
pub fn averaged_dims(m: &AccuracyMatrix) -> Vec<&'static str> {
    let mut out = Vec::new();
    let first = match m.sources.first() {
        Some(f) => f,
        None => return out,
    };
    if m.sources.iter().any(|s| s.prompt != first.prompt) {
        out.push("prompt");
    }
    if m.sources.iter().any(|s| s.model != first.model) {
        out.push("model");
    }
    if m.sources.iter().any(|s| s.dataset != first.dataset) {
        out.push("dataset");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfgs(axis: Axis, n: usize, model: &str, dataset: &str) -> Vec<GenerationConfig> {
        let m = Manifest::full();
        match axis {
            Axis::Prompt => m.prompts[..n]
                .iter()
                .map(|&p| GenerationConfig::new(p, model, dataset))
                .collect(),
            Axis::Model => m.models[..n]
                .iter()
                .map(|x| GenerationConfig::new(PromptStrategy::ZeroShot, x.clone(), dataset))
                .collect(),
            Axis::Dataset => m.datasets[..n]
                .iter()
                .map(|d| GenerationConfig::new(PromptStrategy::ZeroShot, model, d.clone()))
                .collect(),
        }
    }

    fn constant(v: f64, model: &str) -> AccuracyMatrix {
        let c = cfgs(Axis::Prompt, 2, model, "qa");
        AccuracyMatrix::new(
            Axis::Prompt,
            c.clone(),
            c,
            vec![vec![v; 2]; 2],
            FixedDims::new(None, Some(model), Some("qa")),
        )
        .unwrap()
    }

    #[test]
    fn accuracy_counts() {
        let l = [Label::Ai, Label::Ai, Label::Human, Label::Human];
        assert_eq!(accuracy_of(&[0.9, 0.6, 0.1, 0.7], &l).unwrap(), 0.75);
        assert_eq!(accuracy_of(&[0.9, 0.6, 0.1, 0.2], &l).unwrap(), 1.0);
        assert_eq!(accuracy_of(&[0.5; 4], &l).unwrap(), 0.5);
        assert!(accuracy_of(&[], &[]).is_err());
    }

    #[test]
    fn fixed_dims_round_trip() {
        let f: FixedDims = "model=llama-70b, dataset=qa".parse().unwrap();
        assert_eq!(f.model.as_deref(), Some("llama-70b"));
        assert_eq!(f.to_string(), "model=llama-70b,dataset=qa");
        assert!("colour=red".parse::<FixedDims>().is_err());
        assert!("prompt=9-shot".parse::<FixedDims>().is_err());
    }

    #[test]
    fn axis_config_lists() {
        let m = Manifest::full();
        let f = FixedDims::new(None, Some("llama-70b"), Some("qa"));
        assert_eq!(axis_configs(&m, Axis::Prompt, &f).unwrap().len(), 6);
        let f = FixedDims::new(None, None, Some("qa"));
        let models = axis_configs(&m, Axis::Model, &f).unwrap();
        assert_eq!(models.len(), 7);
        assert!(models.iter().all(|c| c.prompt == PromptStrategy::ZeroShot));
        let f = FixedDims::new(None, Some("qwen-14b"), None);
        assert_eq!(axis_configs(&m, Axis::Dataset, &f).unwrap().len(), 4);
        assert!(axis_configs(&m, Axis::Prompt, &FixedDims::default()).is_err());
    }

    #[test]
    fn aggregate_means() {
        let a = constant(0.8, "llama-70b");
        let b = constant(0.9, "qwen-14b");
        let m = aggregate(&[a.clone(), b]).unwrap();
        assert!((m.values[0][0] - 0.85).abs() < 1e-12);
        assert_eq!(m.train_configs[0].model, AVERAGED);
        assert_eq!(m.fixed.model, None);
        assert_eq!(m.fixed.dataset.as_deref(), Some("qa"));
        assert_eq!(averaged_dims(&m), vec!["model"]);
        assert_eq!(aggregate(&[a.clone()]).unwrap().values, a.values);
        let c = constant(0.3, "x");
        assert_eq!(aggregate(&[c.clone(), c.clone(), c]).unwrap().values[1][1], 0.3);
    }

    #[test]
    fn aggregate_rejects_shape_mismatch() {
        let a = constant(0.8, "m");
        let c = cfgs(Axis::Prompt, 3, "m", "qa");
        let b = AccuracyMatrix::new(Axis::Prompt, c.clone(), c, vec![vec![0.5; 3]; 3], FixedDims::default()).unwrap();
        assert!(matches!(aggregate(&[a, b]), Err(Error::Argument(_))));
    }

    #[test]
    fn matrix_validation() {
        let c = cfgs(Axis::Dataset, 2, "m", "");
        assert!(matches!(
            AccuracyMatrix::new(Axis::Dataset, c.clone(), c.clone(), vec![vec![0.5, 1.2], vec![0.5, 0.5]], FixedDims::default()),
            Err(Error::Range { row: 0, col: 1, .. })
        ));
        assert!(AccuracyMatrix::new(Axis::Dataset, c.clone(), c, vec![vec![0.5]], FixedDims::default()).is_err());
    }
}
