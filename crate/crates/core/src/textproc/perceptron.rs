//! Averaged perceptron over sparse string features, and the STXP1 model
//! file format.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 5] = b"STXP1";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Perceptron {
    pub classes: Vec<String>,
    /// feature -> (class index, weight)
    pub weights: HashMap<String, Vec<(u16, f32)>>,
}

impl Perceptron {
    /// Highest-scoring class; ties go to the lowest class index.
    pub fn predict<'a>(&self, features: impl IntoIterator<Item = &'a str>) -> u16 {
        let mut scores = vec![0f64; self.classes.len()];
        for f in features {
            if let Some(ws) = self.weights.get(f) {
                for &(c, w) in ws {
                    scores[c as usize] += w as f64;
                }
            }
        }
        argmax(&scores)
    }
}

fn argmax(scores: &[f64]) -> u16 {
    let mut best = 0usize;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best as u16
}

#[derive(Default, Clone, Copy)]
struct Cell {
    weight: f64,
    total: f64,
    stamp: u64,
}

/// Online trainer with lazy weight averaging.
pub struct Trainer {
    classes: Vec<String>,
    features: HashMap<String, u32>,
    /// Per feature id, the classes that have been touched.
    cells: Vec<Vec<(u16, Cell)>>,
    instances: u64,
}

impl Trainer {
    pub fn new(classes: Vec<String>) -> Trainer {
        Trainer {
            classes,
            features: HashMap::new(),
            cells: Vec::new(),
            instances: 0,
        }
    }

    fn intern(&mut self, f: &str) -> u32 {
        if let Some(&i) = self.features.get(f) {
            return i;
        }
        let i = self.features.len() as u32;
        self.features.insert(f.to_string(), i);
        self.cells.push(Vec::new());
        i
    }

    pub fn predict(&self, features: &[String]) -> u16 {
        let mut scores = vec![0f64; self.classes.len()];
        for f in features {
            if let Some(&fi) = self.features.get(f.as_str()) {
                for (c, cell) in &self.cells[fi as usize] {
                    scores[*c as usize] += cell.weight;
                }
            }
        }
        argmax(&scores)
    }

    pub fn update(&mut self, truth: u16, guess: u16, features: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        let now = self.instances;
        for f in features {
            let fi = self.intern(f);
            for (c, delta) in [(truth, 1.0), (guess, -1.0)] {
                let row = &mut self.cells[fi as usize];
                let k = match row.iter().position(|(x, _)| *x == c) {
                    Some(k) => k,
                    None => {
                        row.push((c, Cell::default()));
                        row.len() - 1
                    }
                };
                let cell = &mut row[k].1;
                cell.total += (now - cell.stamp) as f64 * cell.weight;
                cell.stamp = now;
                cell.weight += delta;
            }
        }
    }

    /// Average the weights over all updates seen and drop zeros.
    pub fn finish(self) -> Perceptron {
        let n = self.instances.max(1) as f64;
        let mut weights = HashMap::with_capacity(self.features.len());
        for (name, &fi) in &self.features {
            let mut row: Vec<(u16, f32)> = self.cells[fi as usize]
                .iter()
                .map(|(c, cell)| {
                    let total = cell.total + (self.instances - cell.stamp) as f64 * cell.weight;
                    (*c, (total / n) as f32)
                })
                .filter(|(_, w)| *w != 0.0)
                .collect();
            row.sort_by_key(|(c, _)| *c);
            if !row.is_empty() {
                weights.insert(name.clone(), row);
            }
        }
        Perceptron {
            classes: self.classes,
            weights,
        }
    }
}

/// Writer for the little-endian STXP1 layout. Sections are written in order
/// by the caller; a SHA-256 of the body is appended by [`ModelWriter::finish`].
pub struct ModelWriter {
    buf: Vec<u8>,
}

impl Default for ModelWriter {
    fn default() -> Self {
        ModelWriter { buf: MAGIC.to_vec() }
    }
}

impl ModelWriter {
    pub fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn f32(&mut self, v: f32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn str(&mut self, s: &str) {
        let len = u16::try_from(s.len()).expect("model strings are short");
        self.u16(len);
        self.buf.extend_from_slice(s.as_bytes());
    }

    pub fn finish(mut self) -> Vec<u8> {
        let digest = Sha256::digest(&self.buf);
        self.buf.extend_from_slice(&digest);
        self.buf
    }
}

pub struct ModelReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::Config(format!("tagger model: {}", msg.into()))
}

impl<'a> ModelReader<'a> {
    /// Check magic and checksum.
    pub fn open(bytes: &'a [u8]) -> Result<ModelReader<'a>> {
        if bytes.is_empty() {
            return Err(corrupt("empty model file"));
        }
        if bytes.len() < MAGIC.len() + 32 || &bytes[..MAGIC.len()] != MAGIC {
            return Err(corrupt("bad magic header, expected STXP1"));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(corrupt("checksum mismatch"));
        }
        Ok(ModelReader {
            buf: body,
            pos: MAGIC.len(),
        })
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| corrupt("truncated"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn str(&mut self) -> Result<String> {
        let n = self.u16()? as usize;
        let b = self.take(n)?;
        String::from_utf8(b.to_vec()).map_err(|_| corrupt("invalid UTF-8"))
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.buf.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn learns_a_trivial_rule() {
        let classes = vec!["A".to_string(), "B".to_string()];
        let mut t = Trainer::new(classes);
        let data = [(vec!["x=1".to_string()], 0u16), (vec!["x=2".to_string()], 1u16)];
        for _ in 0..5 {
            for (f, y) in &data {
                let g = t.predict(f);
                t.update(*y, g, f);
            }
        }
        let p = t.finish();
        assert_eq!(p.predict(["x=1"]), 0);
        assert_eq!(p.predict(["x=2"]), 1);
        assert_eq!(p.predict(["unseen"]), 0);
    }

    #[test]
    fn reader_rejects_damage() {
        let mut w = ModelWriter::default();
        w.str("hello");
        w.u32(7);
        let bytes = w.finish();
        let mut r = ModelReader::open(&bytes).unwrap();
        assert_eq!(r.str().unwrap(), "hello");
        assert_eq!(r.u32().unwrap(), 7);
        assert!(r.at_end());

        let mut bad = bytes.clone();
        bad[6] ^= 1;
        assert!(matches!(ModelReader::open(&bad), Err(Error::Config(_))));
        assert!(matches!(ModelReader::open(b"NOPE1xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx"), Err(Error::Config(_))));
        assert!(ModelReader::open(&[]).is_err());
    }
}
