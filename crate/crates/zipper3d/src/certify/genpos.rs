use super::jordan::piece_pair;
use crate::error::{invalid, Result};
use crate::family::{build_zipper, enumerate_sigma, Domain, FamilyConfig};
use crate::zipper::{address_of, eval_address, holder_exponent, LinearZipper, Zipper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Digits used when evaluating the parametrization.
const EVAL_DEPTH: usize = 48;

fn phi(z: &Zipper, t: &LinearZipper, u: f64) -> crate::geom::Vec3 {
    let (a, r, odd) = address_of(t, u, EVAL_DEPTH);
    let last = if odd { r > 0.0 } else { r >= 1.0 };
    eval_address(z, a.digits(), last)
}

/// Log-log fit of the largest sampled `|f(x) - f(y)|` against `|x - y|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    pub exponent: f64,
    pub constant: f64,
    /// `(h, max |f(x) - f(x + h)|)` per scale.
    pub points: Vec<(f64, f64)>,
}

fn fit(points: Vec<(f64, f64)>) -> Result<HolderFit> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(h, d)| (h.ln(), d.ln())).collect();
    if pts.len() < 2 {
        return invalid("need at least two scales with nonzero differences");
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(HolderFit { exponent: slope, constant: (my - slope * mx).exp(), points })
}

/// Geometric scales in `[lo, hi]`.
fn scales(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|l| lo * (hi / lo).powf(l as f64 / (n - 1).max(1) as f64)).collect()
}

/// Hoelder exponent of `phi` on `[lo, hi]` estimated from `samples` random
/// pairs per scale, with pair distances in `[1e-6, min(0.1, (hi - lo) / 4)]`.
pub fn holder_estimate(z: &Zipper, t: &LinearZipper, lo: f64, hi: f64, samples: usize, seed: u64) -> Result<HolderFit> {
    let top = 0.1f64.min((hi - lo) / 4.0);
    if !(top > 1e-6) || samples == 0 {
        return invalid("interval too short or no samples");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = scales(1e-6, top, 12)
        .into_iter()
        .map(|h| {
            let d = (0..samples)
                .map(|_| {
                    let u = rng.gen_range(lo..hi - h);
                    phi(z, t, u).dist(phi(z, t, u + h))
                })
                .fold(0.0, f64::max);
            (h, d)
        })
        .collect();
    fit(pts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenPosReport {
    pub k: usize,
    pub pair: (u64, u64),
    pub interval_a: (f64, f64),
    pub interval_b: (f64, f64),
    pub samples: usize,
    /// Extremes of `|f(xi,s,t) - f(eta,s,t)| / (|xi - eta| r_k)`.
    pub quotient_min: f64,
    pub quotient_max: f64,
    /// The bracket implied by the point-shift and second-difference bounds.
    pub quotient_bracket: (f64, f64),
    pub within_bracket: bool,
    /// Fit in `(s, t)` at the centre of the region.
    pub holder: HolderFit,
    /// Exponent of the whole parametrization at the centre of the region.
    pub holder_exact: f64,
    pub exponent_above_two_thirds: bool,
}

/// Sampled estimates for `f(xi, s, t) = phi(xi, s) - phi(xi, t)` on the k-th
/// piece pair: difference quotients in `xi` over `region`, and the Hoelder
/// exponent in `(s, t)`.
pub fn genpos_hypotheses(cfg: &FamilyConfig, region: Domain, k: usize, samples: usize, seed: u64) -> Result<GenPosReport> {
    let d = cfg.domain();
    let inside = |(a, b): (f64, f64), (lo, hi): (f64, f64)| a < b && a >= lo && b <= hi;
    if !(inside(region.rho, d.rho) && inside(region.theta, d.theta) && inside(region.phi, d.phi)) {
        return Err(crate::Error::OutOfDomain("region is not a box inside D".into()));
    }
    if samples == 0 {
        return invalid("samples must be positive");
    }
    let sigma = enumerate_sigma(cfg, 2 * k as u64 + 2)?;
    let (i, j) = sigma.get(k).ok_or_else(|| crate::Error::InvalidInput(format!("k = {k} outside the pairs")))?;
    let pair = piece_pair(cfg.m, k, i, j);
    let t = cfg.linear_zipper()?;
    let span = |addrs: &[crate::zipper::Address]| {
        addrs.iter().map(|a| t.apply_interval(a, 0.0, 1.0)).fold((f64::INFINITY, f64::NEG_INFINITY), |acc, iv| {
            (acc.0.min(iv.0), acc.1.max(iv.1))
        })
    };
    let (ia, ib) = (span(&pair.a), span(&pair.b));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut qmin, mut qmax) = (f64::INFINITY, 0.0f64);
    let mut used = 0;
    for _ in 0..samples {
        let xi = region.at([rng.gen(), rng.gen(), rng.gen()]);
        let eta = region.at([rng.gen(), rng.gen(), rng.gen()]);
        let dx = xi.dist(eta);
        if !(dx > 1e-9) || !d.contains(xi) || !d.contains(eta) {
            continue;
        }
        let (s, u) = (rng.gen_range(ia.0..ia.1), rng.gen_range(ib.0..ib.1));
        let (za, zb) = (build_zipper(cfg, xi)?, build_zipper(cfg, eta)?);
        let fa = phi(&za, &t, s) - phi(&za, &t, u);
        let fb = phi(&zb, &t, s) - phi(&zb, &t, u);
        let r_k = 5f64.sqrt() * za.map(cfg.m + 1).ratio * za.map(1).ratio.powi(i as i32);
        let q = (fa - fb).norm() / dx / r_k;
        qmin = qmin.min(q);
        qmax = qmax.max(q);
        used += 1;
    }
    if used == 0 {
        return invalid("every sampled parameter pair was degenerate");
    }
    let bracket = (0.8 * 0.98 * 0.41f64.sqrt() / 5f64.sqrt(), 1.22 * 1.59f64.sqrt());

    let centre = region.at([0.5, 0.5, 0.5]);
    let z = build_zipper(cfg, centre)?;
    let holder = holder_st(&z, &t, ia, ib, samples, seed)?;
    let holder_exact = holder_exponent(&z, &t)?;
    Ok(GenPosReport {
        k,
        pair: (i, j),
        interval_a: ia,
        interval_b: ib,
        samples: used,
        quotient_min: qmin,
        quotient_max: qmax,
        quotient_bracket: bracket,
        within_bracket: qmin > bracket.0 && qmax < bracket.1,
        exponent_above_two_thirds: holder.exponent > 2.0 / 3.0,
        holder,
        holder_exact,
    })
}

/// Fit for `(s, t) -> phi(s) - phi(t)` on `ia x ib`, steps in random
/// directions.
fn holder_st(z: &Zipper, t: &LinearZipper, ia: (f64, f64), ib: (f64, f64), samples: usize, seed: u64) -> Result<HolderFit> {
    let top = 0.1f64.min((ia.1 - ia.0).min(ib.1 - ib.0) / 4.0);
    if !(top > 1e-6) {
        return invalid("parameter intervals too short for the scale range");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let pts = scales(1e-6, top, 12)
        .into_iter()
        .map(|h| {
            let d = (0..samples)
                .map(|_| {
                    let w: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    let (ds, dt) = (h * w.cos(), h * w.sin());
                    let s = rng.gen_range(ia.0 + h..ia.1 - h);
                    let u = rng.gen_range(ib.0 + h..ib.1 - h);
                    let f0 = phi(z, t, s) - phi(z, t, u);
                    let f1 = phi(z, t, s + ds) - phi(z, t, u + dt);
                    f0.dist(f1)
                })
                .fold(0.0, f64::max);
            (h, d)
        })
        .collect();
    fit(pts)
}
