use std::f64::consts::PI;

use serde::Serialize;

use super::analysis::{gain_db, GainEntry, GainReport};
use super::{members, proper_subsets, LatticeIndexCode, Subset};
use crate::error::{Error, Result};

/// A finite constellation whose points carry message-tuple labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledConstellation {
    pub name: String,
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
}

impl LabeledConstellation {
    pub fn new(name: impl Into<String>, points: Vec<Vec<f64>>, labels: Vec<Vec<usize>>, sizes: Vec<usize>) -> Result<Self> {
        let n = points.first().map_or(0, Vec::len);
        let total: usize = sizes.iter().product();
        if points.len() != labels.len() || points.len() != total {
            return Err(Error::InvalidInput(format!(
                "{} points, {} labels, {} message tuples",
                points.len(),
                labels.len(),
                total
            )));
        }
        if points.iter().any(|p| p.len() != n) || n == 0 {
            return Err(Error::IncompatibleDimensions("points differ in dimension".into()));
        }
        let mut seen = vec![false; total];
        for l in &labels {
            if l.len() != sizes.len() || l.iter().zip(&sizes).any(|(v, s)| v >= s) {
                return Err(Error::InvalidInput(format!("label {l:?} is out of range")));
            }
            let i = Self::index_of(&sizes, l);
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!("label {l:?} is used twice")));
            }
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].contains(a) {
                return Err(Error::InvalidInput(format!("point {a:?} is repeated")));
            }
        }
        Ok(LabeledConstellation {
            name: name.into(),
            n,
            points,
            labels,
            sizes,
        })
    }

    fn index_of(sizes: &[usize], label: &[usize]) -> usize {
        label.iter().zip(sizes).rev().fold(0, |acc, (v, s)| acc * s + v)
    }

    /// 16-PSK with two 4-ary messages: point `m = (3w₁ + 4w₂) mod 16` sits
    /// at angle `2πm/16` on the unit circle.
    pub fn psk16() -> Self {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for w2 in 0..4 {
            for w1 in 0..4 {
                let m = (3 * w1 + 4 * w2) % 16;
                let a = 2.0 * PI * m as f64 / 16.0;
                points.push(vec![a.cos(), a.sin()]);
                labels.push(vec![w1, w2]);
            }
        }
        Self::new("psk16", points, labels, vec![4, 4]).expect("valid labelling")
    }

    /// 16-QAM on `{0,1,2,3}² − 1.5` with four binary messages from the two
    /// level set partition of ℤ²/4ℤ²:
    /// `w₁ = x+y`, `w₂ = x`, `w₃ = ⌊x/2⌋+⌊y/2⌋`, `w₄ = ⌊x/2⌋`, all mod 2.
    pub fn qam16_set_partition() -> Self {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for y in 0..4usize {
            for x in 0..4usize {
                points.push(vec![x as f64 - 1.5, y as f64 - 1.5]);
                labels.push(vec![(x + y) % 2, x % 2, (x / 2 + y / 2) % 2, (x / 2) % 2]);
            }
        }
        Self::new("qam16", points, labels, vec![2, 2, 2, 2]).expect("valid labelling")
    }

    /// The codebook of a lattice index code with mixed-radix labels.
    pub fn from_code(code: &LatticeIndexCode, cap: u128) -> Result<Self> {
        let book = code.codebook_exact(cap)?;
        let points = book.iter().map(|p| code.coarse().to_real(p)).collect();
        let labels = (0..book.len() as u128).map(|i| code.tuple(i)).collect();
        Self::new("lattice-index-code", points, labels, code.sizes())
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn rate(&self, s: Subset) -> f64 {
        (0..self.k())
            .filter(|k| s >> k & 1 == 1)
            .map(|k| (self.sizes[k] as f64).log2() / self.n as f64)
            .sum()
    }

    /// Indices of the points whose labels agree with `values` on `s`.
    pub fn subset_points(&self, s: Subset, values: &[usize]) -> Vec<usize> {
        let known = members(s, self.k());
        (0..self.points.len())
            .filter(|&i| known.iter().zip(values).all(|(&m, &v)| self.labels[i][m - 1] == v))
            .collect()
    }

    /// Squared minimum distance within each subcode, minimised over the
    /// known values.
    pub fn distance_sq(&self, s: Subset) -> Result<f64> {
        let known = members(s, self.k());
        let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
        for (i, l) in self.labels.iter().enumerate() {
            groups.entry(known.iter().map(|&m| l[m - 1]).collect()).or_default().push(i);
        }
        let mut best = f64::INFINITY;
        for idx in groups.values() {
            if idx.len() < 2 {
                return Err(Error::DegenerateSubcode);
            }
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    let d: f64 = self.points[i].iter().zip(&self.points[j]).map(|(x, y)| (x - y).powi(2)).sum();
                    best = best.min(d);
                }
            }
        }
        Ok(best)
    }

    pub fn gain_report(&self) -> Result<GainReport> {
        let d0 = self.distance_sq(0)?;
        let entries = proper_subsets(self.k())
            .map(|s| {
                let d = self.distance_sq(s)?;
                let rate = self.rate(s);
                Ok(GainEntry {
                    mask: s,
                    subset: members(s, self.k()),
                    d_s: d.sqrt(),
                    d_s_sq: None,
                    rate,
                    gain_db: gain_db(d / d0, rate),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GainReport::new(self.k(), self.n, d0, None, entries, None)
    }
}
