use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::{document_profile, FeatureId, N_FEATURES};
use crate::textproc::Annotator;

/// A trainable AI-text classifier.
///
/// `predict` returns the probability that a text is AI-generated and must
/// stay in `[0, 1]`. `train` must be deterministic for a fixed seed.
pub trait Detector: Sync {
    type Model: Send + Sync;

    fn train(&self, examples: &[(&str, Label)], seed: u64) -> Result<Self::Model>;

    fn predict(&self, model: &Self::Model, text: &str) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GdParams {
    pub learning_rate: Option<f64>,
    pub max_epochs: usize,
    pub tolerance: f64,
    pub l2: f64,
}

impl Default for GdParams {
    fn default() -> Self {
        GdParams {
            learning_rate: None,
            max_epochs: 500,
            tolerance: 1e-6,
            l2: 1e-3,
        }
    }
}

/// Binary logistic regression over standardized inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub epochs: usize,
    pub converged: bool,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LogisticModel {
    /// Missing inputs are imputed with the training mean.
    fn standardize(&self, x: &[Option<f64>]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| v.map_or(0.0, |v| (v - m) / s))
            .collect()
    }

    pub fn probability(&self, x: &[Option<f64>]) -> f64 {
        let z = self.standardize(x);
        sigmoid(self.bias + z.iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>())
    }

    /// Full-batch gradient descent on the mean log loss plus an L2 penalty.
    /// Stops when the loss changes by less than the tolerance.
    pub fn fit(x: &[Vec<Option<f64>>], y: &[bool], seed: u64, params: &GdParams) -> Result<LogisticModel> {
        if x.len() != y.len() {
            return Err(Error::Argument(format!("{} rows but {} labels", x.len(), y.len())));
        }
        let pos = y.iter().filter(|&&b| b).count();
        let neg = y.len() - pos;
        if pos < 2 || neg < 2 {
            return Err(Error::Training(format!(
                "need at least 2 examples per class, got {pos} AI and {neg} human"
            )));
        }
        let d = x[0].len();
        if x.iter().any(|r| r.len() != d) {
            return Err(Error::Argument("ragged feature matrix".into()));
        }
        let n = x.len() as f64;

        let mut mean = vec![0.0; d];
        let mut scale = vec![1.0; d];
        for j in 0..d {
            let col: Vec<f64> = x.iter().filter_map(|r| r[j]).collect();
            if col.is_empty() {
                continue;
            }
            let m = col.iter().sum::<f64>() / col.len() as f64;
            let var = col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / col.len() as f64;
            mean[j] = m;
            if var.sqrt() > 1e-12 {
                scale[j] = var.sqrt();
            }
        }
        let mut model = LogisticModel {
            mean,
            scale,
            weights: vec![0.0; d],
            bias: 0.0,
            epochs: 0,
            converged: false,
        };
        let z: Vec<Vec<f64>> = x.iter().map(|r| model.standardize(r)).collect();
        let t: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();

        let lr = params
            .learning_rate
            .unwrap_or_else(|| 1.0 / (0.25 * (top_eigenvalue(&z) + 1.0) + params.l2));

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in model.weights.iter_mut() {
            *w = rng.gen_range(-0.01..0.01);
        }

        let loss = |m: &LogisticModel| {
            let mut l = 0.0;
            for (row, &ti) in z.iter().zip(&t) {
                let s = m.bias + row.iter().zip(&m.weights).map(|(a, b)| a * b).sum::<f64>();
                l += softplus(s) - ti * s;
            }
            l / n + 0.5 * params.l2 * m.weights.iter().map(|w| w * w).sum::<f64>()
        };

        let mut prev = loss(&model);
        let mut grad = vec![0.0; d];
        for epoch in 1..=params.max_epochs {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut gb = 0.0;
            for (row, &ti) in z.iter().zip(&t) {
                let s = model.bias + row.iter().zip(&model.weights).map(|(a, b)| a * b).sum::<f64>();
                let e = sigmoid(s) - ti;
                gb += e;
                for (g, v) in grad.iter_mut().zip(row) {
                    *g += e * v;
                }
            }
            for (w, g) in model.weights.iter_mut().zip(&grad) {
                *w -= lr * (g / n + params.l2 * *w);
            }
            model.bias -= lr * gb / n;
            model.epochs = epoch;
            let cur = loss(&model);
            if (prev - cur).abs() < params.tolerance {
                model.converged = true;
                break;
            }
            prev = cur;
        }
        Ok(model)
    }
}

/// Largest eigenvalue of `Z^T Z / n` by power iteration.
fn top_eigenvalue(z: &[Vec<f64>]) -> f64 {
    let d = z.first().map_or(0, Vec::len);
    if d == 0 {
        return 0.0;
    }
    let n = z.len() as f64;
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut lambda = 0.0;
    for _ in 0..50 {
        let mut next = vec![0.0; d];
        for row in z {
            let p: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (o, r) in next.iter_mut().zip(row) {
                *o += p * r / n;
            }
        }
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return 0.0;
        }
        lambda = norm;
        v = next.into_iter().map(|x| x / norm).collect();
    }
    lambda
}

type Vector = Arc<Vec<Option<f64>>>;

/// Logistic regression over the document feature profile.
///
/// Profiles are cached by text, so the same document seen in several cells
/// is annotated once.
pub struct FeatureDetector<'a> {
    annotator: Annotator<'a>,
    features: Vec<FeatureId>,
    params: GdParams,
    cache: RwLock<HashMap<String, Vector>>,
}

impl FeatureDetector<'static> {
    pub fn builtin() -> Result<Self> {
        Ok(FeatureDetector::new(Annotator::builtin()?))
    }
}

impl<'a> FeatureDetector<'a> {
    pub fn new(annotator: Annotator<'a>) -> Self {
        FeatureDetector {
            annotator,
            features: FeatureId::all().collect(),
            params: GdParams::default(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Restrict the model to a subset of features.
    pub fn with_features(mut self, features: Vec<FeatureId>) -> Self {
        self.features = features;
        self
    }

    pub fn with_params(mut self, params: GdParams) -> Self {
        self.params = params;
        self
    }

    pub fn features(&self) -> &[FeatureId] {
        &self.features
    }

    /// Feature vector of a text, in `features()` order.
    pub fn vector(&self, text: &str) -> Vector {
        if let Some(v) = self.cache.read().expect("feature cache poisoned").get(text) {
            return Arc::clone(v);
        }
        let profile = document_profile(&self.annotator.annotate(text));
        debug_assert_eq!(profile.values.len(), N_FEATURES);
        let v: Vector = Arc::new(self.features.iter().map(|&f| profile.get(f)).collect());
        self.cache
            .write()
            .expect("feature cache poisoned")
            .entry(text.to_string())
            .or_insert(v)
            .clone()
    }

    /// Annotate many texts in parallel to warm the cache.
    pub fn prefetch(&self, texts: &[&str]) {
        use rayon::prelude::*;
        texts.par_iter().for_each(|t| {
            self.vector(t);
        });
    }

    pub fn cached(&self) -> usize {
        self.cache.read().expect("feature cache poisoned").len()
    }
}

impl Detector for FeatureDetector<'_> {
    type Model = LogisticModel;

    fn train(&self, examples: &[(&str, Label)], seed: u64) -> Result<LogisticModel> {
        let x: Vec<Vec<Option<f64>>> = examples.iter().map(|(t, _)| self.vector(t).to_vec()).collect();
        let y: Vec<bool> = examples.iter().map(|(_, l)| *l == Label::Ai).collect();
        LogisticModel::fit(&x, &y, seed, &self.params)
    }

    fn predict(&self, model: &LogisticModel, text: &str) -> f64 {
        model.probability(&self.vector(text))
    }
}
