use super::FamilyConfig;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Pairs `(i, j)` with `|i log q1 - j log q2m| < 0.1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaSeq {
    /// Sorted by `i`; the k-th pair (1-based) is `pairs[k - 1]`.
    pub pairs: Vec<(u64, u64)>,
    pub k_max: u64,
    pub q1: f64,
    pub q2m: f64,
    /// Both coordinate sequences strictly increasing (hence injective).
    pub monotone: bool,
    /// For every sampled `q_{m+1}/q_m` in (0.98, 1.02), all solutions of
    /// `|i log q1 - j log q2m| < log 1.06 + |log(q_{m+1}/q_m)|`, the condition
    /// for the pieces to meet, are in `pairs`.
    pub invariant: bool,
    pub sampled_ratios: Vec<f64>,
}

impl SigmaSeq {
    /// `(i_k, j_k)`, `k` 1-based.
    pub fn get(&self, k: usize) -> Option<(u64, u64)> {
        k.checked_sub(1).and_then(|i| self.pairs.get(i).copied())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// All `0 <= i, j <= k_max` with `|i log q1 - j log q2m| < bound`, sorted.
pub fn sigma_pairs(q1: f64, q2m: f64, k_max: u64, bound: f64) -> Vec<(u64, u64)> {
    let (a, b) = (q1.ln(), q2m.ln());
    let mut out = Vec::new();
    for i in 0..=k_max {
        // j near i a / b; |log q| > 1 leaves at most one candidate per side
        let c = i as f64 * a / b;
        let lo = (c - bound / b.abs()).floor().max(0.0) as u64;
        let hi = ((c + bound / b.abs()).ceil() as u64).min(k_max);
        for j in lo..=hi {
            if (i as f64 * a - j as f64 * b).abs() < bound {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn enumerate_sigma(cfg: &FamilyConfig, k_max: u64) -> Result<SigmaSeq> {
    let (q1, q2m) = (cfg.q1, cfg.q2m);
    for (name, q) in [("q1", q1), ("q2m", q2m)] {
        if !(q > 1.0 / 7.0 && q < 1.0 / 5.0) {
            return invalid(format!("{name} = {q} outside (1/7, 1/5)"));
        }
    }
    let pairs = sigma_pairs(q1, q2m, k_max, 0.1);
    let monotone = pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
    let base: BTreeSet<_> = pairs.iter().copied().collect();
    let sampled_ratios: Vec<f64> = (0..11).map(|s| 0.98 + 0.04 * (s as f64 + 0.5) / 11.0).collect();
    let invariant = sampled_ratios.iter().all(|&r| {
        let bound = 1.06f64.ln() + r.ln().abs();
        sigma_pairs(q1, q2m, k_max, bound).iter().all(|p| base.contains(p))
    });
    Ok(SigmaSeq { pairs, k_max, q1, q2m, monotone, invariant, sampled_ratios })
}
