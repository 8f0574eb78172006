use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::corpus::{GenerationConfig, Manifest};
use crate::error::{Error, Result};

use super::{AccuracyMatrix, Axis, FixedDims, AVERAGED};

const CORNER: &str = "train\\test";

/// Read an accuracy CSV: header row of test-config ids, first column of
/// train-config ids. `#` lines are comments; `# axis=...` names the axis
/// when the ids alone do not. With a manifest, every id must be registered
/// and the axis fully covered.
pub fn ingest_accuracy_csv(path: impl AsRef<Path>, manifest: Option<&Manifest>) -> Result<AccuracyMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_accuracy_csv(&text, manifest)
}

fn parse_ids(cells: &[String], what: &str) -> Result<Vec<GenerationConfig>> {
    cells
        .iter()
        .map(|s| {
            s.parse::<GenerationConfig>()
                .map_err(|_| Error::Integrity(format!("{what} {s:?} is not a prompt/model/dataset config id")))
        })
        .collect()
}

fn infer_axis(configs: &[GenerationConfig]) -> Result<Option<Axis>> {
    let varies = |f: fn(&GenerationConfig) -> String| configs.iter().map(f).collect::<BTreeSet<_>>().len() > 1;
    let mut axes = Vec::new();
    if varies(|c| c.prompt.key().to_string()) {
        axes.push(Axis::Prompt);
    }
    if varies(|c| c.model.clone()) {
        axes.push(Axis::Model);
    }
    if varies(|c| c.dataset.clone()) {
        axes.push(Axis::Dataset);
    }
    match axes.as_slice() {
        [] => Ok(None),
        [a] => Ok(Some(*a)),
        _ => Err(Error::Integrity(format!(
            "config ids vary along {} dimensions",
            axes.iter().map(|a| a.key()).collect::<Vec<_>>().join(" and ")
        ))),
    }
}

pub fn parse_accuracy_csv(text: &str, manifest: Option<&Manifest>) -> Result<AccuracyMatrix> {
    let mut declared = None;
    for line in text.lines() {
        if let Some(rest) = line.trim().strip_prefix('#') {
            for kv in rest.split_whitespace() {
                if let Some(v) = kv.strip_prefix("axis=") {
                    declared = Some(v.parse::<Axis>()?);
                }
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        rows.push(rec.iter().map(|s| s.trim().to_string()).collect());
    }
    let (header, body) = rows
        .split_first()
        .ok_or_else(|| Error::Integrity("accuracy CSV has no header row".into()))?;
    if header.len() < 2 {
        return Err(Error::Integrity("header row has no test-config columns".into()));
    }
    let test_configs = parse_ids(&header[1..], "column header")?;
    let width = header.len();
    for (r, row) in body.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Integrity(format!(
                "row {r} has {} cells but the header has {width}",
                row.len()
            )));
        }
    }
    let row_ids: Vec<String> = body.iter().map(|r| r[0].clone()).collect();
    let train_configs = parse_ids(&row_ids, "row id")?;
    if train_configs != test_configs {
        return Err(Error::Integrity("row ids do not match the header row".into()));
    }

    let mut values = Vec::with_capacity(body.len());
    for (r, row) in body.iter().enumerate() {
        let mut out = Vec::with_capacity(width - 1);
        for (c, cell) in row[1..].iter().enumerate() {
            let v = cell.parse::<f64>().ok().filter(|v| (0.0..=1.0).contains(v));
            out.push(v.ok_or_else(|| Error::Range {
                row: r,
                col: c,
                value: cell.clone(),
            })?);
        }
        values.push(out);
    }

    let axis = match (infer_axis(&test_configs)?, declared) {
        (Some(a), Some(d)) if a != d => {
            return Err(Error::Integrity(format!("declared axis {d} but ids vary along {a}")));
        }
        (Some(a), _) => a,
        (None, Some(d)) => d,
        (None, None) => Axis::Prompt,
    };

    if let Some(m) = manifest {
        for c in &test_configs {
            if !m.contains(c) {
                return Err(Error::Integrity(format!("config {c} is not in the manifest")));
            }
        }
        if test_configs.len() != axis.len_in(m) {
            return Err(Error::Integrity(format!(
                "{} configs along the {axis} axis but the manifest registers {}",
                test_configs.len(),
                axis.len_in(m)
            )));
        }
    }

    let first = &test_configs[0];
    let keep = |v: &str| (v != AVERAGED).then(|| v.to_string());
    let fixed = match axis {
        Axis::Prompt => FixedDims {
            prompt: None,
            model: keep(&first.model),
            dataset: keep(&first.dataset),
        },
        Axis::Model => FixedDims {
            prompt: Some(first.prompt),
            model: None,
            dataset: keep(&first.dataset),
        },
        Axis::Dataset => FixedDims {
            prompt: Some(first.prompt),
            model: keep(&first.model),
            dataset: None,
        },
    };
    AccuracyMatrix::new(axis, train_configs, test_configs, values, fixed)
}

/// Write the matrix as CSV, after `header` comment lines.
pub fn write_accuracy_csv(m: &AccuracyMatrix, header: &[String], mut w: impl Write) -> std::io::Result<()> {
    for h in header {
        writeln!(w, "# {h}")?;
    }
    writeln!(w, "# axis={} setting={}", m.axis, m.setting())?;
    let mut out = csv::Writer::from_writer(&mut w);
    let mut head = vec![CORNER.to_string()];
    head.extend(m.test_configs.iter().map(GenerationConfig::id));
    out.write_record(&head)?;
    for (c, row) in m.train_configs.iter().zip(&m.values) {
        let mut rec = vec![c.id()];
        rec.extend(row.iter().map(|v| v.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()
}

pub fn emit_accuracy_csv(m: &AccuracyMatrix, header: &[String], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_accuracy_csv(m, header, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PromptStrategy;

    fn prompt_csv(cell: &str) -> String {
        let ids: Vec<String> = PromptStrategy::ALL
            .iter()
            .map(|p| format!("{p}/llama-70b/qa"))
            .collect();
        let mut s = format!("# tool header\n{CORNER},{}\n", ids.join(","));
        for (r, id) in ids.iter().enumerate() {
            let cells: Vec<String> = (0..6)
                .map(|c| {
                    if (r, c) == (2, 4) {
                        cell.to_string()
                    } else if r == c {
                        "0.99".into()
                    } else {
                        "0.85".into()
                    }
                })
                .collect();
            s.push_str(&format!("{id},{}\n", cells.join(",")));
        }
        s
    }

    #[test]
    fn loads_a_prompt_matrix() {
        let m = parse_accuracy_csv(&prompt_csv("0.85"), Some(&Manifest::full())).unwrap();
        assert_eq!(m.axis, Axis::Prompt);
        assert_eq!(m.shape(), (6, 6));
        assert_eq!(m.diagonal(), vec![0.99; 6]);
        assert_eq!(m.fixed.to_string(), "model=llama-70b,dataset=qa");
    }

    #[test]
    fn out_of_range_cell_has_coordinates() {
        let e = parse_accuracy_csv(&prompt_csv("1.2"), None).unwrap_err();
        assert!(matches!(e, Error::Range { row: 2, col: 4, ref value } if value == "1.2"));
        let e = parse_accuracy_csv(&prompt_csv("high"), None).unwrap_err();
        assert!(matches!(e, Error::Range { row: 2, col: 4, .. }));
    }

    #[test]
    fn manifest_mismatch_is_integrity() {
        let mut m = Manifest::full();
        m.models.retain(|x| x != "llama-70b");
        assert!(matches!(parse_accuracy_csv(&prompt_csv("0.8"), Some(&m)), Err(Error::Integrity(_))));
        let mut m = Manifest::full();
        m.prompts.pop();
        assert!(matches!(parse_accuracy_csv(&prompt_csv("0.8"), Some(&m)), Err(Error::Integrity(_))));
        let swapped = prompt_csv("0.8").replacen("3-shot/llama-70b/qa,0.85", "style/llama-70b/qa,0.85", 1);
        assert!(matches!(parse_accuracy_csv(&swapped, None), Err(Error::Integrity(_))));
    }

    #[test]
    fn write_then_parse() {
        let m = parse_accuracy_csv(&prompt_csv("0.123456789"), None).unwrap();
        let mut buf = Vec::new();
        write_accuracy_csv(&m, &["lingshift test".to_string()], &mut buf).unwrap();
        let back = parse_accuracy_csv(std::str::from_utf8(&buf).unwrap(), None).unwrap();
        assert_eq!(back, m);
    }
}
