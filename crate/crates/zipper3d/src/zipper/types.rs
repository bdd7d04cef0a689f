use crate::error::{invalid, Error, Result};
use crate::geom::{Similarity3, Vec3};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Reversal bits `eps_1..eps_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(pub Vec<u8>);

impl Signature {
    pub fn zeros(m: usize) -> Signature {
        Signature(vec![0; m])
    }

    /// All zero except the listed 1-based indices.
    pub fn with_reversed(m: usize, reversed: &[usize]) -> Result<Signature> {
        let mut s = Signature::zeros(m);
        for &i in reversed {
            if i == 0 || i > m {
                return invalid(format!("signature index {i} outside 1..={m}"));
            }
            s.0[i - 1] = 1;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit of map `i` (1-based).
    pub fn eps(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn check(&self) -> Result<()> {
        if self.0.iter().any(|&b| b > 1) {
            return invalid("signature bits must be 0 or 1");
        }
        Ok(())
    }
}

/// Finite multiindex over `{1..m}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Address(pub Vec<u32>);

impl Address {
    pub fn empty() -> Address {
        Address(Vec::new())
    }

    pub fn new(digits: impl Into<Vec<u32>>) -> Address {
        Address(digits.into())
    }

    /// `digit` repeated `n` times.
    pub fn repeat(digit: u32, n: usize) -> Address {
        Address(vec![digit; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    /// Drops the first `k` digits.
    pub fn shift(&self, k: usize) -> Address {
        Address(self.0[k.min(self.0.len())..].to_vec())
    }

    /// `j` followed by `self`.
    pub fn prepend(&self, j: &Address) -> Address {
        let mut d = j.0.clone();
        d.extend_from_slice(&self.0);
        Address(d)
    }

    pub fn then(&self, other: &Address) -> Address {
        other.prepend(self)
    }

    pub fn push(&self, digit: u32) -> Address {
        let mut d = self.0.clone();
        d.push(digit);
        Address(d)
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn check(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&d| d == 0 || d as usize > m) {
            Some(d) => Err(Error::InvalidInput(format!("address digit {d} outside 1..={m}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A zipper in R^3: maps `S_1..S_m`, vertices `z_0..z_m`, signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Zipper {
    pub maps: Vec<Similarity3>,
    pub vertices: Vec<Vec3>,
    pub signature: Signature,
}

impl Zipper {
    /// Checks lengths, signature bits and ratios; does not check the vertex
    /// conditions (see [`super::validate`]).
    pub fn new(maps: Vec<Similarity3>, vertices: Vec<Vec3>, signature: Signature) -> Result<Zipper> {
        let z = Zipper { maps, vertices, signature };
        z.check_structure()?;
        Ok(z)
    }

    pub fn check_structure(&self) -> Result<()> {
        let m = self.maps.len();
        if m == 0 {
            return invalid("zipper needs at least one map");
        }
        if self.vertices.len() != m + 1 {
            return invalid(format!("{} maps need {} vertices, got {}", m, m + 1, self.vertices.len()));
        }
        if self.signature.len() != m {
            return invalid(format!("signature length {} differs from map count {m}", self.signature.len()));
        }
        self.signature.check()?;
        if let Some(s) = self.maps.iter().find(|s| !(s.ratio > 0.0 && s.ratio < 1.0)) {
            return invalid(format!("map ratio {} outside (0,1)", s.ratio));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.maps.len()
    }

    /// Map `S_i`, 1-based.
    pub fn map(&self, i: usize) -> &Similarity3 {
        &self.maps[i - 1]
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|s| s.ratio).collect()
    }

    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(|s| s.ratio).fold(0.0, f64::max)
    }

    pub fn first(&self) -> Vec3 {
        self.vertices[0]
    }

    pub fn last(&self) -> Vec3 {
        self.vertices[self.m()]
    }
}

/// Affine zipper on [0,1] with ratios `p_i` and breakpoints
/// `t_i = p_1 + ... + p_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearZipper {
    pub ratios: Vec<f64>,
    pub signature: Signature,
    breaks: Vec<f64>,
}

impl LinearZipper {
    pub fn new(ratios: Vec<f64>, signature: Signature) -> Result<LinearZipper> {
        if ratios.is_empty() || ratios.len() != signature.len() {
            return invalid("linear zipper needs one ratio per signature bit");
        }
        signature.check()?;
        if ratios.iter().any(|&p| !(p > 0.0 && p < 1.0)) && ratios.len() > 1 {
            return invalid("linear zipper ratios must lie in (0,1)");
        }
        let sum: f64 = ratios.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return invalid(format!("linear zipper ratios sum to {sum}, not 1"));
        }
        let mut breaks = Vec::with_capacity(ratios.len() + 1);
        let mut acc = 0.0;
        breaks.push(0.0);
        for p in &ratios[..ratios.len() - 1] {
            acc += p;
            breaks.push(acc);
        }
        breaks.push(1.0);
        Ok(LinearZipper { ratios, signature, breaks })
    }

    /// Ratios proportional to `q_i^s`, renormalized to sum 1.
    pub fn from_powers(q: &[f64], s: f64, signature: Signature) -> Result<LinearZipper> {
        let p: Vec<f64> = q.iter().map(|x| x.powf(s)).collect();
        let sum: f64 = p.iter().sum();
        LinearZipper::new(p.iter().map(|x| x / sum).collect(), signature)
    }

    pub fn uniform(m: usize, signature: Signature) -> Result<LinearZipper> {
        LinearZipper::new(vec![1.0 / m as f64; m], signature)
    }

    pub fn m(&self) -> usize {
        self.ratios.len()
    }

    /// Breakpoint `t_i`, `0 <= i <= m`.
    pub fn breakpoint(&self, i: usize) -> f64 {
        self.breaks[i]
    }

    /// `T_i(u)`, 1-based.
    pub fn apply(&self, i: usize, u: f64) -> f64 {
        let p = self.ratios[i - 1];
        if self.signature.eps(i) == 0 {
            self.breaks[i - 1] + p * u
        } else {
            self.breaks[i] - p * u
        }
    }

    /// Image `T_a([lo, hi])` as an ordered interval.
    pub fn apply_interval(&self, a: &Address, lo: f64, hi: f64) -> (f64, f64) {
        let (mut x, mut y) = (lo, hi);
        for &d in a.digits().iter().rev() {
            x = self.apply(d as usize, x);
            y = self.apply(d as usize, y);
        }
        (x.min(y), x.max(y))
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Ordered samples `(t, gamma(t))` of an attractor.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyline {
    pub points: Vec<(f64, Vec3)>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest distance between consecutive points.
    pub fn max_step(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].1.dist(w[1].1)).fold(0.0, f64::max)
    }
}
