//! Heatmaps (SVG plus sidecar CSV) and run manifests with output headers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{stable_hash, Manifest, PromptStrategy};
use crate::error::{Error, Result};
use crate::evalharness::AccuracyMatrix;
use crate::features::REGISTRY_VERSION;
use crate::shiftcorr::FeatureShiftMatrix;

/// Everything a run depends on. Its hash goes into every output header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub prompts: Vec<PromptStrategy>,
    pub models: Vec<String>,
    pub datasets: Vec<String>,
    #[serde(default)]
    pub paths: BTreeMap<String, PathBuf>,
    pub seed: u64,
    pub alpha: f64,
    pub registry_version: u32,
}

impl RunManifest {
    pub fn new(manifest: &Manifest, seed: u64, alpha: f64) -> RunManifest {
        RunManifest {
            prompts: manifest.prompts.clone(),
            models: manifest.models.clone(),
            datasets: manifest.datasets.clone(),
            paths: BTreeMap::new(),
            seed,
            alpha,
            registry_version: REGISTRY_VERSION,
        }
    }

    pub fn with_path(mut self, role: &str, path: impl Into<PathBuf>) -> RunManifest {
        self.paths.insert(role.to_string(), path.into());
        self
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            prompts: self.prompts.clone(),
            models: self.models.clone(),
            datasets: self.datasets.clone(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunManifest> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    /// Fails on the first referenced path that does not exist.
    pub fn check_paths(&self) -> Result<()> {
        for p in self.paths.values() {
            if !p.exists() {
                return Err(Error::io(p, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory")));
            }
        }
        Ok(())
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("manifest serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Seed for a named sub-step.
    pub fn sub_seed(&self, name: &str) -> u64 {
        self.seed ^ stable_hash(name)
    }

    /// Header lines for outputs of `command`. No timestamps, so reruns
    /// produce identical files.
    pub fn header(&self, command: &str) -> Vec<String> {
        vec![
            format!("lingshift {} {command}", crate::VERSION),
            format!("seed={} alpha={} registry={}", self.seed, self.alpha, self.registry_version),
            format!("manifest_sha256={}", self.hash()),
        ]
    }
}

/// A labeled matrix ready to draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub title: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl Grid {
    pub fn from_accuracy(m: &AccuracyMatrix) -> Grid {
        Grid {
            title: format!("accuracy, cross-{} ({})", m.axis, m.setting()),
            row_labels: m.train_configs.iter().map(|c| c.id()).collect(),
            col_labels: m.test_configs.iter().map(|c| c.id()).collect(),
            values: m.values.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect(),
        }
    }

    pub fn from_shift(s: &FeatureShiftMatrix) -> Grid {
        Grid {
            title: format!("shift of {}, cross-{}", s.feature, s.axis),
            row_labels: s.train_configs.iter().map(|c| c.id()).collect(),
            col_labels: s.test_configs.iter().map(|c| c.id()).collect(),
            values: s.values.clone(),
        }
    }

    /// Square-ish CSV: corner cell, then column labels; one row per row
    /// label. Empty or `NA` cells are missing. `# title: ...` sets the title.
    pub fn parse_csv(text: &str) -> Result<Grid> {
        let mut title = String::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            if let Some(t) = line.trim_start_matches('#').trim().strip_prefix("title:") {
                title = t.trim().to_string();
            }
        }
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
        let col_labels: Vec<String> = head.iter().skip(1).map(str::to_string).collect();
        let mut row_labels = Vec::new();
        let mut values = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            if rec.len() != col_labels.len() + 1 {
                return Err(Error::Integrity(format!("grid row {i} has {} cells, expected {}", rec.len() - 1, col_labels.len())));
            }
            row_labels.push(rec[0].to_string());
            let row = (1..rec.len())
                .map(|j| match rec[j].trim() {
                    "" | "NA" => Ok(None),
                    s => s.parse::<f64>().ok().filter(|v| v.is_finite()).map(Some).ok_or_else(|| Error::Range {
                        row: i,
                        col: j - 1,
                        value: s.to_string(),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        Ok(Grid {
            title,
            row_labels,
            col_labels,
            values,
        })
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Grid> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut g = Grid::parse_csv(&text)?;
        if g.title.is_empty() {
            g.title = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(g)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_labels.len(), self.col_labels.len())
    }

    /// Min and max of the present values.
    pub fn range(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().flatten().flatten().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}

/// Write a grid as CSV in the layout [`Grid::parse_csv`] reads.
pub fn write_grid_csv(grid: &Grid, header: &[String], w: impl std::io::Write) -> std::io::Result<()> {
    let mut w = w;
    for h in header {
        writeln!(w, "# {h}")?;
    }
    writeln!(w, "# title: {}", grid.title)?;
    let mut out = csv::Writer::from_writer(w);
    let mut head = vec!["train\\test".to_string()];
    head.extend(grid.col_labels.iter().cloned());
    out.write_record(&head)?;
    for (label, row) in grid.row_labels.iter().zip(&grid.values) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|v| v.map_or("NA".to_string(), |x| x.to_string())));
        out.write_record(&rec)?;
    }
    out.flush()
}

/// Labels with the parts shared by every label removed, so `0-shot/m/qa`
/// against `3-shot/m/qa` shows as `0-shot` and `3-shot`.
pub fn short_labels(labels: &[String]) -> Vec<String> {
    let parts: Vec<Vec<&str>> = labels.iter().map(|l| l.split('/').collect()).collect();
    let n = parts.first().map_or(0, Vec::len);
    if labels.len() < 2 || parts.iter().any(|p| p.len() != n) {
        return labels.to_vec();
    }
    let varying: Vec<usize> = (0..n).filter(|&k| parts.iter().any(|p| p[k] != parts[0][k])).collect();
    if varying.is_empty() {
        return labels.to_vec();
    }
    parts
        .iter()
        .map(|p| varying.iter().map(|&k| p[k]).collect::<Vec<_>>().join("/"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Palette {
    /// Light to dark, for accuracies.
    Sequential,
    /// Blue through white to red, centered on zero; for shifts.
    Diverging,
}

impl Palette {
    fn stops(self) -> &'static [(f64, [u8; 3])] {
        match self {
            Palette::Sequential => &[
                (0.0, [255, 247, 236]),
                (0.25, [253, 212, 158]),
                (0.5, [252, 141, 89]),
                (0.75, [215, 48, 31]),
                (1.0, [127, 0, 0]),
            ],
            Palette::Diverging => &[
                (0.0, [33, 102, 172]),
                (0.25, [146, 197, 222]),
                (0.5, [247, 247, 247]),
                (0.75, [244, 165, 130]),
                (1.0, [178, 24, 43]),
            ],
        }
    }

    /// Color at `t` in [0, 1].
    pub fn rgb(self, t: f64) -> [u8; 3] {
        let t = if t.is_nan() { 0.5 } else { t.clamp(0.0, 1.0) };
        let s = self.stops();
        let k = s.windows(2).position(|w| t <= w[1].0).unwrap_or(s.len() - 2);
        let ((t0, c0), (t1, c1)) = (s[k], s[k + 1]);
        let u = (t - t0) / (t1 - t0);
        let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * u).round() as u8;
        [mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2])]
    }

    pub fn hex(self, t: f64) -> String {
        let [r, g, b] = self.rgb(t);
        format!("#{r:02x}{g:02x}{b:02x}")
    }

    /// Value range mapped onto the palette. Diverging scales are symmetric
    /// about zero.
    pub fn domain(self, range: Option<(f64, f64)>) -> (f64, f64) {
        let (lo, hi) = range.unwrap_or((0.0, 0.0));
        match self {
            Palette::Sequential => (lo, hi),
            Palette::Diverging => {
                let m = lo.abs().max(hi.abs());
                (-m, m)
            }
        }
    }
}

/// Position of `v` within `(lo, hi)`; a degenerate range maps to the middle.
pub fn scale(v: f64, (lo, hi): (f64, f64)) -> f64 {
    let span = hi - lo;
    if !(span > f64::EPSILON * lo.abs().max(hi.abs()).max(1.0)) {
        return 0.5;
    }
    ((v - lo) / span).clamp(0.0, 1.0)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Cell annotation text.
pub fn annotate(v: Option<f64>) -> String {
    match v {
        None => "NA".into(),
        Some(x) if x == 0.0 => "0".into(),
        Some(x) if x.abs() >= 0.01 => format!("{x:.3}"),
        Some(x) => format!("{x:.1e}"),
    }
}

const CELL_W: f64 = 64.0;
const CELL_H: f64 = 30.0;
const CHAR_W: f64 = 6.6;
const LEGEND_W: f64 = 90.0;
const GAP: f64 = 36.0;

struct Layout {
    left: f64,
    top: f64,
    height: f64,
    width: f64,
}

fn layout(g: &Grid, rows: &[String], cols: &[String]) -> Layout {
    let longest = |v: &[String]| v.iter().map(|s| s.chars().count()).max().unwrap_or(0) as f64;
    let left = 16.0 + longest(rows) * CHAR_W;
    let top = 34.0 + longest(cols) * CHAR_W * 0.72;
    let (r, c) = g.shape();
    let grid_w = left + c as f64 * CELL_W + LEGEND_W;
    let title_w = 16.0 + g.title.chars().count() as f64 * 7.5;
    Layout {
        left,
        top,
        height: top + r as f64 * CELL_H + 16.0,
        width: grid_w.max(title_w),
    }
}

fn draw_panel(out: &mut String, idx: usize, g: &Grid, palette: Palette, y0: f64) -> f64 {
    let rows = short_labels(&g.row_labels);
    let cols = short_labels(&g.col_labels);
    let l = layout(g, &rows, &cols);
    let domain = palette.domain(g.range());
    let _ = writeln!(out, r#"<g class="panel" id="panel{idx}" transform="translate(0,{y0})">"#);
    let _ = writeln!(out, r#"<text class="title" x="8" y="18" font-size="14" font-weight="bold">{}</text>"#, escape(&g.title));
    for (j, c) in cols.iter().enumerate() {
        let x = l.left + (j as f64 + 0.5) * CELL_W;
        let y = l.top - 6.0;
        let _ = writeln!(
            out,
            r#"<text class="col-label" x="{x}" y="{y}" font-size="11" transform="rotate(-40 {x} {y})">{}</text>"#,
            escape(c)
        );
    }
    for (i, (r, row)) in rows.iter().zip(&g.values).enumerate() {
        let y = l.top + i as f64 * CELL_H;
        let _ = writeln!(
            out,
            r#"<text class="row-label" x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
            l.left - 6.0,
            y + CELL_H / 2.0 + 4.0,
            escape(r)
        );
        for (j, v) in row.iter().enumerate() {
            let x = l.left + j as f64 * CELL_W;
            let (fill, ink) = match v {
                None => ("#dddddd".to_string(), "#000000"),
                Some(v) => {
                    let [r, g, b] = palette.rgb(scale(*v, domain));
                    let luma = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
                    (palette.hex(scale(*v, domain)), if luma < 128.0 { "#ffffff" } else { "#000000" })
                }
            };
            let data = v.map_or("NA".to_string(), |x| x.to_string());
            let _ = writeln!(
                out,
                r#"<rect class="cell" x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="{fill}" stroke="white" data-row="{i}" data-col="{j}" data-value="{data}"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text class="cell-value" x="{}" y="{}" font-size="11" text-anchor="middle" fill="{ink}">{}</text>"#,
                x + CELL_W / 2.0,
                y + CELL_H / 2.0 + 4.0,
                annotate(*v)
            );
        }
    }
    // legend: vertical bar, max at the top
    let (r, c) = g.shape();
    let lx = l.left + c as f64 * CELL_W + 16.0;
    let lh = (r as f64 * CELL_H).max(CELL_H);
    let _ = writeln!(out, r#"<defs><linearGradient id="legend{idx}" x1="0" y1="1" x2="0" y2="0">"#);
    let degenerate = scale(domain.1, domain) == 0.5;
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let color = if degenerate { palette.hex(0.5) } else { palette.hex(t) };
        let _ = writeln!(out, r#"<stop offset="{t}" stop-color="{color}"/>"#);
    }
    let _ = writeln!(out, "</linearGradient></defs>");
    let _ = writeln!(
        out,
        r#"<rect class="legend" x="{lx}" y="{}" width="14" height="{lh}" fill="url(#legend{idx})" stroke="gray" data-min="{}" data-max="{}"/>"#,
        l.top, domain.0, domain.1
    );
    let _ = writeln!(
        out,
        r#"<text class="legend-max" x="{}" y="{}" font-size="10">{}</text>"#,
        lx + 18.0,
        l.top + 8.0,
        annotate(Some(domain.1))
    );
    let _ = writeln!(
        out,
        r#"<text class="legend-min" x="{}" y="{}" font-size="10">{}</text>"#,
        lx + 18.0,
        l.top + lh,
        annotate(Some(domain.0))
    );
    let _ = writeln!(out, "</g>");
    l.height
}

/// Panels stacked top to bottom in one SVG document.
pub fn render_svg(panels: &[(&Grid, Palette)], header: &[String]) -> String {
    let layouts: Vec<Layout> = panels
        .iter()
        .map(|(g, _)| layout(g, &short_labels(&g.row_labels), &short_labels(&g.col_labels)))
        .collect();
    let width = layouts.iter().map(|l| l.width).fold(0.0, f64::max).ceil();
    let height = (layouts.iter().map(|l| l.height).sum::<f64>() + GAP * panels.len().saturating_sub(1) as f64).ceil();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for h in header {
        let _ = writeln!(out, "<!-- {} -->", h.replace("--", "- -"));
    }
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let mut y = 0.0;
    for (i, (g, p)) in panels.iter().enumerate() {
        y += draw_panel(&mut out, i, g, *p, y) + GAP;
    }
    out.push_str("</svg>\n");
    out
}

/// Long-form CSV of every drawn value: `panel,row,col,value`.
pub fn sidecar_csv(panels: &[&Grid], header: &[String]) -> String {
    let mut buf = Vec::new();
    for h in header {
        buf.extend_from_slice(format!("# {h}\n").as_bytes());
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["panel", "title", "row", "col", "value"]).expect("write to memory");
        for (k, g) in panels.iter().enumerate() {
            for (r, row) in g.row_labels.iter().zip(&g.values) {
                for (c, v) in g.col_labels.iter().zip(row) {
                    let v = v.map_or("NA".to_string(), |x| x.to_string());
                    w.write_record([k.to_string().as_str(), &g.title, r, c, &v]).expect("write to memory");
                }
            }
        }
        w.flush().expect("write to memory");
    }
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Sidecar path: same stem, `.csv` extension.
pub fn sidecar_path(svg: &Path) -> PathBuf {
    svg.with_extension("csv")
}

/// Write the SVG to `path` and the sidecar CSV next to it. Returns the
/// sidecar path.
pub fn emit_heatmap(panels: &[(&Grid, Palette)], header: &[String], path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    if panels.is_empty() {
        return Err(Error::Argument("nothing to draw".into()));
    }
    for (g, _) in panels {
        let (r, c) = g.shape();
        if r == 0 || c == 0 || g.values.len() != r || g.values.iter().any(|row| row.len() != c) {
            return Err(Error::Argument(format!("grid {:?} is not a {r}x{c} matrix", g.title)));
        }
    }
    fs::write(path, render_svg(panels, header)).map_err(|e| Error::io(path, e))?;
    let side = sidecar_path(path);
    let grids: Vec<&Grid> = panels.iter().map(|(g, _)| *g).collect();
    fs::write(&side, sidecar_csv(&grids, header)).map_err(|e| Error::io(&side, e))?;
    Ok(side)
}

/// Accuracy above, feature shift below, after checking that both cover
/// the same configurations.
pub fn emit_paired_heatmap(acc: &Grid, shift: &Grid, header: &[String], path: impl AsRef<Path>) -> Result<PathBuf> {
    if short_labels(&acc.row_labels) != short_labels(&shift.row_labels)
        || short_labels(&acc.col_labels) != short_labels(&shift.col_labels)
    {
        return Err(Error::Integrity(format!(
            "accuracy grid ({:?} x {:?}) and shift grid ({:?} x {:?}) cover different configurations",
            short_labels(&acc.row_labels),
            short_labels(&acc.col_labels),
            short_labels(&shift.row_labels),
            short_labels(&shift.col_labels)
        )));
    }
    emit_heatmap(&[(acc, Palette::Sequential), (shift, Palette::Diverging)], header, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(values: Vec<Vec<Option<f64>>>) -> Grid {
        let n = values.len();
        let m = values[0].len();
        Grid {
            title: "t".into(),
            row_labels: (0..n).map(|i| format!("p{i}/m/qa")).collect(),
            col_labels: (0..m).map(|i| format!("p{i}/m/qa")).collect(),
            values,
        }
    }

    fn data_values(svg: &str) -> Vec<String> {
        svg.match_indices("data-value=\"")
            .map(|(i, m)| {
                let rest = &svg[i + m.len()..];
                rest[..rest.find('"').unwrap()].to_string()
            })
            .collect()
    }

    #[test]
    fn six_by_six_grid() {
        let g = grid((0..6).map(|i| (0..6).map(|j| Some(0.5 + (i * 6 + j) as f64 / 80.0)).collect()).collect());
        let svg = render_svg(&[(&g, Palette::Sequential)], &["h".into()]);
        assert_eq!(svg.matches("class=\"cell\"").count(), 36);
        assert_eq!(svg.matches("class=\"cell-value\"").count(), 36);
        assert_eq!(svg.matches("class=\"row-label\"").count(), 6);
        assert!(svg.contains(">0.500<"));
        assert!(svg.contains(">p3<"));
        assert!(svg.starts_with("<?xml") && svg.contains("<!-- h -->"));
    }

    #[test]
    fn constant_matrix_is_uniform() {
        let g = grid(vec![vec![Some(0.8); 3]; 3]);
        let svg = render_svg(&[(&g, Palette::Sequential)], &[]);
        let fills: std::collections::BTreeSet<&str> = svg
            .lines()
            .filter(|l| l.contains("class=\"cell\""))
            .map(|l| {
                let i = l.find("fill=\"").unwrap() + 6;
                &l[i..i + 7]
            })
            .collect();
        assert_eq!(fills.len(), 1);
        assert!(svg.contains("data-min=\"0.8\" data-max=\"0.8\""));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn sidecar_matches_svg() {
        let g = grid(vec![vec![Some(0.1 + 0.2), None], vec![Some(1.0 / 3.0), Some(-0.0004)]]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.svg");
        let side = emit_heatmap(&[(&g, Palette::Diverging)], &["x".into()], &path).unwrap();
        let svg = fs::read_to_string(&path).unwrap();
        let csv_text = fs::read_to_string(side).unwrap();
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(csv_text.as_bytes());
        let from_csv: Vec<String> = r.records().map(|rec| rec.unwrap()[4].to_string()).collect();
        assert_eq!(from_csv, data_values(&svg));
        assert_eq!(from_csv[0].parse::<f64>().unwrap(), 0.1 + 0.2);
    }

    #[test]
    fn grid_csv_round_trip() {
        let mut g = grid(vec![vec![Some(0.25), None], vec![Some(-1.5e-7), Some(0.0)]]);
        g.title = "shift of gram.passive_voice, cross-prompt".into();
        let mut buf = Vec::new();
        write_grid_csv(&g, &["seed=1".into()], &mut buf).unwrap();
        let back = Grid::parse_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn palette_ends_and_scale_guard() {
        assert_eq!(Palette::Diverging.hex(0.5), "#f7f7f7");
        assert_eq!(Palette::Sequential.rgb(0.0), [255, 247, 236]);
        assert_eq!(Palette::Sequential.rgb(1.0), [127, 0, 0]);
        assert_eq!(scale(3.0, (3.0, 3.0)), 0.5);
        assert_eq!(scale(2.0, (0.0, 4.0)), 0.5);
        assert_eq!(Palette::Diverging.domain(Some((-0.1, 0.3))), (-0.3, 0.3));
    }

    #[test]
    fn short_labels_drop_shared_parts() {
        let l = vec!["0-shot/gpt/qa".to_string(), "3-shot/gpt/qa".to_string()];
        assert_eq!(short_labels(&l), vec!["0-shot", "3-shot"]);
        let one = vec!["x/y".to_string()];
        assert_eq!(short_labels(&one), one);
    }

    #[test]
    fn paired_requires_matching_configs() {
        let a = grid(vec![vec![Some(0.9), Some(0.6)], vec![Some(0.7), Some(0.95)]]);
        let mut s = grid(vec![vec![Some(0.0), Some(0.01)], vec![Some(-0.01), Some(0.0)]]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pair.svg");
        emit_paired_heatmap(&a, &s, &[], &path).unwrap();
        let svg = fs::read_to_string(&path).unwrap();
        assert_eq!(svg.matches("class=\"panel\"").count(), 2);
        s.row_labels.reverse();
        assert!(matches!(emit_paired_heatmap(&a, &s, &[], &path), Err(Error::Integrity(_))));
    }

    #[test]
    fn manifest_hash_and_header() {
        let m = RunManifest::new(&Manifest::full(), 7, 0.05);
        let h = m.header("evaluate");
        assert_eq!(h.len(), 3);
        assert!(h[1].contains("seed=7"));
        assert_eq!(m.hash().len(), 64);
        assert_eq!(m.hash(), m.clone().hash());
        assert_ne!(m.hash(), RunManifest { seed: 8, ..m.clone() }.hash());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.json");
        m.save(&p).unwrap();
        assert_eq!(RunManifest::load(&p).unwrap(), m);
        let missing = m.with_path("corpus", dir.path().join("nope.jsonl"));
        let err = missing.check_paths().unwrap_err();
        assert!(err.to_string().contains("nope.jsonl"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let g = grid(vec![vec![Some(0.5)]]);
        let err = emit_heatmap(&[(&g, Palette::Sequential)], &[], "/nonexistent-dir/x.svg").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
