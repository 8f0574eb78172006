//! Feature shifts between configurations and their correlation with
//! detector accuracy.

pub mod corrections;
pub mod shift;
pub mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalharness::{AccuracyMatrix, Axis};
use crate::features::{Category, FeatureId, N_FEATURES};

pub use corrections::{bh_fdr, bonferroni, Adjusted};
pub use shift::{feature_difference, feature_shift, FeatureShiftMatrix, ProfileTable};
pub use stats::{average_ranks, parse_methods, pearson, permutation_p, spearman, t_test_p, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Negligible,
    Low,
    Moderate,
    High,
    Strong,
}

impl Strength {
    pub fn key(self) -> &'static str {
        match self {
            Strength::Negligible => "negligible",
            Strength::Low => "low",
            Strength::Moderate => "moderate",
            Strength::High => "high",
            Strength::Strong => "strong",
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Bands: below 0.1, 0.3, 0.5, 0.7, then strong.
pub fn classify_strength(corr_abs: f64) -> Result<Strength> {
    if !(0.0..=1.0).contains(&corr_abs) {
        return Err(Error::Argument(format!("|r| = {corr_abs} is outside [0, 1]")));
    }
    Ok(if corr_abs < 0.1 {
        Strength::Negligible
    } else if corr_abs < 0.3 {
        Strength::Low
    } else if corr_abs < 0.5 {
        Strength::Moderate
    } else if corr_abs < 0.7 {
        Strength::High
    } else {
        Strength::Strong
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    SettingSpecific,
    Overall,
}

impl Mode {
    pub fn key(self) -> &'static str {
        match self {
            Mode::SettingSpecific => "setting_specific",
            Mode::Overall => "overall",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "setting_specific" | "setting-specific" => Ok(Mode::SettingSpecific),
            "overall" => Ok(Mode::Overall),
            other => Err(Error::Argument(format!("unknown mode {other:?}"))),
        }
    }
}

/// A signed coefficient with its sample size and t-test p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    pub n: usize,
    pub p_value: f64,
}

impl Correlation {
    pub fn corr_abs(&self) -> f64 {
        self.r.abs()
    }
}

/// Correlate paired vectors, dropping pairs with a missing shift.
pub fn correlate_vectors(acc: &[f64], shift: &[Option<f64>], method: Method) -> Result<Correlation> {
    if acc.len() != shift.len() {
        return Err(Error::Argument(format!(
            "{} accuracy cells but {} shift cells",
            acc.len(),
            shift.len()
        )));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = acc.iter().zip(shift).filter_map(|(&a, s)| Some((a, (*s)?))).unzip();
    let r = stats::coefficient(method, &x, &y)?;
    Ok(Correlation {
        r,
        n: x.len(),
        p_value: t_test_p(r, x.len())?,
    })
}

/// Correlation between an accuracy matrix and a same-shaped shift matrix,
/// both flattened row-major.
pub fn correlate(acc: &AccuracyMatrix, shift: &FeatureShiftMatrix, method: Method) -> Result<Correlation> {
    if acc.shape() != shift.shape() || acc.axis != shift.axis {
        return Err(Error::Argument(format!(
            "accuracy matrix {:?} and shift matrix {:?} differ",
            acc.shape(),
            shift.shape()
        )));
    }
    correlate_vectors(&acc.flatten(), &shift.flatten(), method)
}

/// One feature under one method and setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub feature: FeatureId,
    pub category: Category,
    pub axis: Axis,
    pub mode: Mode,
    /// Fixed dims of the matrix, or `overall`.
    pub setting: String,
    pub method: Method,
    /// Pairs left after dropping not-applicable shifts.
    pub n: usize,
    /// Coefficient of `method`; `None` when undefined (too few pairs or a
    /// constant vector).
    pub r_signed: Option<f64>,
    pub pearson_signed: Option<f64>,
    pub spearman_signed: Option<f64>,
    pub corr_abs: Option<f64>,
    pub p_value: Option<f64>,
    pub p_bonferroni: f64,
    pub q_fdr: f64,
    pub significant_bonferroni: bool,
    pub significant_fdr: bool,
    pub strength: Option<Strength>,
}

struct Family<'a> {
    axis: Axis,
    setting: String,
    matrices: Vec<&'a AccuracyMatrix>,
}

fn families(matrices: &[AccuracyMatrix], mode: Mode) -> Vec<Family<'_>> {
    match mode {
        Mode::SettingSpecific => matrices
            .iter()
            .map(|m| Family {
                axis: m.axis,
                setting: m.setting(),
                matrices: vec![m],
            })
            .collect(),
        Mode::Overall => {
            let mut by_axis: BTreeMap<Axis, Vec<&AccuracyMatrix>> = BTreeMap::new();
            for m in matrices {
                by_axis.entry(m.axis).or_default().push(m);
            }
            by_axis
                .into_iter()
                .map(|(axis, ms)| Family {
                    axis,
                    setting: "overall".to_string(),
                    matrices: ms,
                })
                .collect()
        }
    }
}

/// Correlate every feature's shift with accuracy. Setting-specific mode
/// treats each matrix on its own; overall mode concatenates all matrices of
/// an axis. Both corrections run over the 80 features of each
/// (method, axis, setting) family, with undefined correlations counted as
/// p = 1.
pub fn run_analysis(
    profiles: &ProfileTable,
    matrices: &[AccuracyMatrix],
    mode: Mode,
    methods: &[Method],
    alpha: f64,
) -> Result<Vec<CorrelationResult>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Argument(format!("alpha {alpha} must be in (0, 1)")));
    }
    if matrices.is_empty() {
        return Err(Error::Argument("no accuracy matrices".into()));
    }
    let mut missing: Vec<String> = matrices.iter().flat_map(|m| profiles.missing(m)).collect();
    missing.sort();
    missing.dedup();
    if !missing.is_empty() {
        return Err(Error::Integrity(format!("no profiles for cells: {}", missing.join(", "))));
    }

    let mut out = Vec::new();
    for fam in families(matrices, mode) {
        let mut acc = Vec::new();
        let mut shifts: Vec<Vec<Option<f64>>> = vec![Vec::new(); N_FEATURES];
        for m in &fam.matrices {
            acc.extend(m.flatten());
            for sm in profiles.shift_matrices(m)? {
                shifts[sm.feature.index()].extend(sm.flatten());
            }
        }
        let per_feature: Vec<[Option<Correlation>; 2]> = shifts
            .par_iter()
            .map(|s| {
                [
                    correlate_vectors(&acc, s, Method::Pearson).ok(),
                    correlate_vectors(&acc, s, Method::Spearman).ok(),
                ]
            })
            .collect();
        for &method in methods {
            let pick = |c: &[Option<Correlation>; 2]| c[usize::from(method == Method::Spearman)];
            let p: Vec<f64> = per_feature.iter().map(|c| pick(c).map_or(1.0, |x| x.p_value)).collect();
            let bonf = bonferroni(&p, alpha);
            let fdr = bh_fdr(&p, alpha);
            for (f, c) in FeatureId::all().zip(&per_feature) {
                let k = f.index();
                let chosen = pick(c);
                let n = shifts[k].iter().filter(|s| s.is_some()).count();
                out.push(CorrelationResult {
                    feature: f,
                    category: f.category(),
                    axis: fam.axis,
                    mode,
                    setting: fam.setting.clone(),
                    method,
                    n,
                    r_signed: chosen.map(|x| x.r),
                    pearson_signed: c[0].map(|x| x.r),
                    spearman_signed: c[1].map(|x| x.r),
                    corr_abs: chosen.map(|x| x.corr_abs()),
                    p_value: chosen.map(|x| x.p_value),
                    p_bonferroni: bonf.adjusted[k],
                    q_fdr: fdr.adjusted[k],
                    significant_bonferroni: bonf.significant[k],
                    significant_fdr: fdr.significant[k],
                    strength: chosen.map(|x| classify_strength(x.corr_abs())).transpose()?,
                });
            }
        }
    }
    Ok(out)
}

/// Results ordered by descending `corr_abs`, undefined last.
pub fn ranked(results: &[CorrelationResult]) -> Vec<&CorrelationResult> {
    let mut v: Vec<&CorrelationResult> = results.iter().collect();
    v.sort_by(|a, b| {
        let key = |r: &CorrelationResult| r.corr_abs.unwrap_or(-1.0);
        key(b).total_cmp(&key(a)).then(a.feature.index().cmp(&b.feature.index()))
    });
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    Bonferroni,
    Fdr,
}

impl Correction {
    pub const ALL: [Correction; 2] = [Correction::Bonferroni, Correction::Fdr];

    pub fn key(self) -> &'static str {
        match self {
            Correction::Bonferroni => "bonferroni",
            Correction::Fdr => "fdr",
        }
    }
}

/// Significant-feature count and top features for one family and correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub axis: Axis,
    pub mode: Mode,
    pub setting: String,
    pub method: Method,
    pub correction: Correction,
    pub n_significant: usize,
    pub top: Vec<(FeatureId, f64)>,
}

/// Per (axis, setting, method, correction): how many features stay
/// significant, and the `top_k` features by `corr_abs`.
pub fn summarize(results: &[CorrelationResult], top_k: usize) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(Axis, Mode, String, Method), Vec<CorrelationResult>> = BTreeMap::new();
    for r in results {
        groups
            .entry((r.axis, r.mode, r.setting.clone(), r.method))
            .or_default()
            .push(r.clone());
    }
    let mut out = Vec::new();
    for ((axis, mode, setting, method), rs) in groups {
        let top: Vec<(FeatureId, f64)> = ranked(&rs)
            .into_iter()
            .filter_map(|r| Some((r.feature, r.corr_abs?)))
            .take(top_k)
            .collect();
        for correction in Correction::ALL {
            let n_significant = rs
                .iter()
                .filter(|r| match correction {
                    Correction::Bonferroni => r.significant_bonferroni,
                    Correction::Fdr => r.significant_fdr,
                })
                .count();
            out.push(SummaryRow {
                axis,
                mode,
                setting: setting.clone(),
                method,
                correction,
                n_significant,
                top: top.clone(),
            });
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub const RESULT_COLUMNS: [&str; 13] = [
    "feature_id",
    "category",
    "axis",
    "mode",
    "method",
    "n",
    "r_signed",
    "corr_abs",
    "p",
    "p_bonferroni",
    "q_fdr",
    "strength",
    "setting",
];

pub fn write_results_csv(results: &[CorrelationResult], header: &[String], mut w: impl Write) -> std::io::Result<()> {
    for h in header {
        writeln!(w, "# {h}")?;
    }
    let mut out = csv::Writer::from_writer(&mut w);
    out.write_record(RESULT_COLUMNS)?;
    for r in results {
        out.write_record([
            r.feature.key().to_string(),
            r.category.key().to_string(),
            r.axis.key().to_string(),
            r.mode.key().to_string(),
            r.method.key().to_string(),
            r.n.to_string(),
            opt(r.r_signed),
            opt(r.corr_abs),
            opt(r.p_value),
            r.p_bonferroni.to_string(),
            r.q_fdr.to_string(),
            r.strength.map_or("NA", Strength::key).to_string(),
            r.setting.clone(),
        ])?;
    }
    out.flush()
}

pub fn emit_results_csv(results: &[CorrelationResult], header: &[String], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_results_csv(results, header, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "axis",
    "mode",
    "setting",
    "method",
    "correction",
    "n_significant",
    "top_1",
    "top_2",
    "top_3",
];

/// Summary table; top features are written `key:corr_abs` with three
/// columns regardless of how many exist.
pub fn write_summary_csv(rows: &[SummaryRow], header: &[String], mut w: impl Write) -> std::io::Result<()> {
    for h in header {
        writeln!(w, "# {h}")?;
    }
    let mut out = csv::Writer::from_writer(&mut w);
    out.write_record(SUMMARY_COLUMNS)?;
    for r in rows {
        let mut rec = vec![
            r.axis.key().to_string(),
            r.mode.key().to_string(),
            r.setting.clone(),
            r.method.key().to_string(),
            r.correction.key().to_string(),
            r.n_significant.to_string(),
        ];
        for i in 0..3 {
            rec.push(r.top.get(i).map_or(String::new(), |(f, v)| format!("{}:{v:.3}", f.key())));
        }
        out.write_record(&rec)?;
    }
    out.flush()
}
