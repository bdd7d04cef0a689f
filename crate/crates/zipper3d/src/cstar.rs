//! Two-generator multiplicative subgroups of C \ {0}.
//!
//! Everything here is a finite search. "Evidence" verdicts summarize what a
//! bounded scan saw; they are never certificates of the limit statements.

use crate::error::{invalid, Error, Result};
use crate::geom::{Similarity3, Vec3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Generators `xi = r e^{i alpha}`, `eta = R e^{i beta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenPair {
    pub xi: Complex64,
    pub eta: Complex64,
}

impl GenPair {
    pub fn new(xi: Complex64, eta: Complex64) -> Result<GenPair> {
        if xi.norm() == 0.0 || eta.norm() == 0.0 || !xi.is_finite() || !eta.is_finite() {
            return invalid("generators must be finite and nonzero");
        }
        Ok(GenPair { xi, eta })
    }

    pub fn from_polar(r: f64, alpha: f64, big_r: f64, beta: f64) -> Result<GenPair> {
        GenPair::new(Complex64::from_polar(r, alpha), Complex64::from_polar(big_r, beta))
    }
}

/// Reduce an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

// ---------------------------------------------------------------- density

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Dense,
    Dependent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCert {
    pub verdict: Verdict,
    pub witness: Option<[i64; 3]>,
    pub height: i64,
    pub alpha: f64,
    pub beta: f64,
    /// `|k alpha + l beta + m|` at the witness.
    pub witness_residual: Option<f64>,
}

/// Real `alpha, beta` with `alpha u + beta v = 1`.
pub fn solve_coefficients(u: Complex64, v: Complex64) -> Result<(f64, f64)> {
    if v.norm() == 0.0 || (u / v).im.abs() < 1e-12 {
        return Err(Error::Degenerate("Im(u/v) = 0: degenerate direction".into()));
    }
    let det = u.re * v.im - v.re * u.im;
    Ok((v.im / det, -u.im / det))
}

/// `u = log(xi) / (2 pi i)`, so that `xi = e^{2 pi i u}`.
pub fn log_coordinate(z: Complex64) -> Complex64 {
    z.ln() / Complex64::new(0.0, TAU)
}

/// Searches `|k|, |l|, |m| <= height` for `k alpha + l beta + m = 0`.
/// Never answers `Dense`; see [`kronecker_test_with`].
pub fn kronecker_test(u: Complex64, v: Complex64, height: i64) -> Result<DensityCert> {
    kronecker_test_with(u, v, height, false)
}

/// As [`kronecker_test`]; `independence_known` records that rational
/// independence of `1, alpha, beta` was established outside this search, in
/// which case an empty search is reported as `Dense`.
pub fn kronecker_test_with(u: Complex64, v: Complex64, height: i64, independence_known: bool) -> Result<DensityCert> {
    if height < 1 {
        return invalid("height must be positive");
    }
    let (alpha, beta) = solve_coefficients(u, v)?;
    let h = height;
    // one representative per +/- pair: k > 0, or k = 0 and l > 0
    let best = (0..=h)
        .into_par_iter()
        .filter_map(|k| {
            let mut local: Option<(i64, [i64; 3], f64)> = None;
            let l_start = if k == 0 { 1 } else { -h };
            for l in l_start..=h {
                let x = k as f64 * alpha + l as f64 * beta;
                let m = -x.round();
                if m.abs() > h as f64 {
                    continue;
                }
                let res = (x + m).abs();
                // 1e-12 plus the rounding error of the sum
                let tol = 1e-12 + 4.0 * f64::EPSILON * ((k as f64 * alpha).abs() + (l as f64 * beta).abs());
                if res < tol {
                    let w = [k, l, m as i64];
                    let ht = w.iter().map(|c| c.abs()).max().unwrap();
                    if local.map_or(true, |(bh, bw, _)| (ht, w) < (bh, bw)) {
                        local = Some((ht, w, res));
                    }
                }
            }
            local
        })
        .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    Ok(match best {
        Some((_, w, res)) => DensityCert {
            verdict: Verdict::Dependent,
            witness: Some(w),
            height,
            alpha,
            beta,
            witness_residual: Some(res),
        },
        None => DensityCert {
            verdict: if independence_known { Verdict::Dense } else { Verdict::Inconclusive },
            witness: None,
            height,
            alpha,
            beta,
            witness_residual: None,
        },
    })
}

// ----------------------------------------------------- approximation runs

/// Phase deviations at the final record: `e^{i n alpha}` against
/// `e^{-i arg z1}`, and `e^{-i arg z2}` against both `e^{i n beta}` and
/// `e^{i m beta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseLimits {
    pub n_alpha: f64,
    pub n_beta: f64,
    pub m_beta: f64,
}

/// Record-breaking pairs of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxSeq {
    pub pairs: Vec<(u64, u64)>,
    /// Joint residual `|log modulus ratio| + angular distance`, strictly
    /// decreasing.
    pub residuals: Vec<f64>,
    /// `|w - 1|` for the same pairs (ratio scans only; empty otherwise).
    pub deviations: Vec<f64>,
    pub eps: f64,
    pub max_n: u64,
    pub converged: bool,
    pub phase_limits: Option<PhaseLimits>,
}

impl ApproxSeq {
    pub fn final_residual(&self) -> Option<f64> {
        self.residuals.last().copied()
    }

    fn from_best(best: Vec<(u64, f64, f64)>, eps: f64, max_n: u64) -> ApproxSeq {
        let mut pairs = Vec::new();
        let mut residuals = Vec::new();
        let mut deviations = Vec::new();
        for (n, (m, r, d)) in best.into_iter().enumerate() {
            if residuals.last().map_or(true, |&last| r < last) {
                pairs.push((n as u64, m));
                residuals.push(r);
                deviations.push(d);
            }
        }
        let converged = residuals.last().map_or(false, |&r| r < eps);
        ApproxSeq { pairs, residuals, deviations, eps, max_n, converged, phase_limits: None }
    }
}

/// Smallest `score(m)` over `0 <= m <= max_m`, where
/// `score(m) = |a - m b| + extra(m)` and `extra >= 0`. Walks outward from the
/// minimizer of the first term and stops once that term alone cannot win.
fn best_m(a: f64, b: f64, max_m: u64, extra: impl Fn(u64) -> f64) -> (u64, f64) {
    let score = |m: u64| (a - m as f64 * b).abs() + extra(m);
    if b == 0.0 {
        return (0..=max_m).map(|m| (m, score(m))).fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    }
    let centre = (a / b).round().clamp(0.0, max_m as f64) as u64;
    let mut best = (centre, score(centre));
    let mut m = centre;
    while m > 0 {
        m -= 1;
        if (a - m as f64 * b).abs() > best.1 {
            break;
        }
        let s = score(m);
        if s <= best.1 {
            best = (m, s);
        }
    }
    let mut m = centre;
    while m < max_m {
        m += 1;
        if (a - m as f64 * b).abs() > best.1 {
            break;
        }
        let s = score(m);
        if s < best.1 {
            best = (m, s);
        }
    }
    best
}

/// Pairs `0 <= n, m <= max_n` with `z1 xi^n / (z2 eta^m) -> 1`; per `n` the
/// `m` minimizing the joint residual is kept, and the record-breaking pairs
/// are returned in order of `n`.
pub fn ratio_sequence(g: &GenPair, z1: Complex64, z2: Complex64, eps: f64, max_n: u64) -> Result<ApproxSeq> {
    if z1.norm() == 0.0 || z2.norm() == 0.0 {
        return invalid("z1, z2 must be nonzero");
    }
    if !(eps > 0.0) {
        return invalid("eps must be positive");
    }
    let (lr, alpha) = (g.xi.norm().ln(), g.xi.arg());
    let (lbig, beta) = (g.eta.norm().ln(), g.eta.arg());
    let l0 = (z1 / z2).norm().ln();
    let a0 = (z1 / z2).arg();
    let best: Vec<(u64, f64, f64)> = (0..=max_n)
        .into_par_iter()
        .map(|n| {
            let a = l0 + n as f64 * lr;
            let ph_n = a0 + (n as f64 * alpha).rem_euclid(TAU);
            let phase = |m: u64| wrap_angle(ph_n - (m as f64 * beta).rem_euclid(TAU)).abs();
            let (m, r) = best_m(a, lbig, max_n, phase);
            let w = Complex64::from_polar((a - m as f64 * lbig).exp(), ph_n - (m as f64 * beta).rem_euclid(TAU));
            (m, r, (w - 1.0).norm())
        })
        .collect();
    let mut seq = ApproxSeq::from_best(best, eps, max_n);
    if let Some(&(n, m)) = seq.pairs.last() {
        let dev = |a: f64, target: f64| (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, target)).norm();
        seq.phase_limits = Some(PhaseLimits {
            n_alpha: dev(n as f64 * alpha, -z1.arg()),
            n_beta: dev(n as f64 * beta, -z2.arg()),
            m_beta: dev(m as f64 * beta, -z2.arg()),
        });
    }
    Ok(seq)
}

// ---------------------------------------------------------- phase coverage

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Every target of a grid of at least 16 phases was hit.
    SecondType,
    /// Some target was missed.
    FirstType,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetHit {
    pub target: Complex64,
    /// Best `|e^{i n alpha} - target|` over admissible pairs.
    pub deviation: f64,
    /// The pair `(n, m)` with `|xi^n eta^m - 1| < eps` realizing it.
    pub pair: Option<(u64, i64)>,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCoverage {
    pub hits: Vec<TargetHit>,
    pub eps: f64,
    pub max_n: u64,
    pub admissible_pairs: u64,
    pub verdict: Evidence,
}

impl PhaseCoverage {
    pub fn hit_count(&self) -> usize {
        self.hits.iter().filter(|h| h.hit).count()
    }

    pub fn max_deviation(&self) -> f64 {
        self.hits.iter().map(|h| h.deviation).fold(0.0, f64::max)
    }
}

/// `k`-th roots of unity.
pub fn phase_grid(k: usize) -> Vec<Complex64> {
    (0..k).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / k as f64)).collect()
}

/// For each target phase, the best `e^{i n alpha}` over pairs `(n, m)`,
/// `1 <= n <= max_n`, `m` any integer, with `|xi^n eta^m - 1| < eps`.
pub fn phase_coverage(g: &GenPair, targets: &[Complex64], eps: f64, max_n: u64) -> PhaseCoverage {
    let (lr, alpha) = (g.xi.norm().ln(), g.xi.arg());
    let (lbig, beta) = (g.eta.norm().ln(), g.eta.arg());
    let chunks: Vec<(Vec<(f64, Option<(u64, i64)>)>, u64)> = (1..=max_n)
        .into_par_iter()
        .fold(
            || (vec![(f64::INFINITY, None); targets.len()], 0u64),
            |(mut best, mut count), n| {
                let a = n as f64 * lr;
                let centre = if lbig != 0.0 { (-a / lbig).round() as i64 } else { 0 };
                let ph = Complex64::from_polar(1.0, n as f64 * alpha);
                for m in centre - 1..=centre + 1 {
                    let w = Complex64::from_polar(
                        (a + m as f64 * lbig).exp(),
                        n as f64 * alpha + m as f64 * beta,
                    );
                    if (w - 1.0).norm() < eps {
                        count += 1;
                        for (b, t) in best.iter_mut().zip(targets) {
                            let d = (ph - t).norm();
                            if d < b.0 || (d == b.0 && b.1.map_or(true, |p| (n, m) < p)) {
                                *b = (d, Some((n, m)));
                            }
                        }
                    }
                }
                (best, count)
            },
        )
        .collect();
    let mut best = vec![(f64::INFINITY, None::<(u64, i64)>); targets.len()];
    let mut admissible = 0;
    for (chunk, count) in chunks {
        admissible += count;
        for (b, c) in best.iter_mut().zip(chunk) {
            let better = c.0 < b.0 || (c.0 == b.0 && c.1.is_some() && (b.1.is_none() || c.1 < b.1));
            if better {
                *b = c;
            }
        }
    }
    let hits: Vec<TargetHit> = best
        .into_iter()
        .zip(targets)
        .map(|((d, pair), &target)| TargetHit { target, deviation: d, pair, hit: d < eps })
        .collect();
    let all = hits.iter().all(|h| h.hit);
    PhaseCoverage {
        verdict: if all && targets.len() >= 16 { Evidence::SecondType } else { Evidence::FirstType },
        hits,
        eps,
        max_n,
        admissible_pairs: admissible,
    }
}

// ------------------------------------------------------------------- cones

/// A homothety-rotation written around its fixed point.
#[derive(Debug, Clone, Copy)]
struct Spiral {
    centre: Vec3,
    axis: Vec3,
    angle: f64,
    log_ratio: f64,
}

fn spiral_of(f: &Similarity3) -> Result<Spiral> {
    let centre = f
        .fixed_point()
        .ok_or_else(|| Error::InvalidInput("map has no fixed point (ratio 1)".into()))?;
    let (axis, angle) = f.rot.axis_angle();
    Ok(Spiral { centre, axis, angle, log_ratio: f.ratio.ln() })
}

impl Spiral {
    /// Unit direction of `f^n(w) - c` and `log |f^n(w) - c|`.
    fn orbit(&self, w: Vec3, n: u64) -> (Vec3, f64) {
        let v = w - self.centre;
        let r = crate::geom::Rotation3::from_axis_angle(self.axis, (n as f64 * self.angle).rem_euclid(TAU));
        (r.apply(v).normalized().unwrap(), v.norm().ln() + n as f64 * self.log_ratio)
    }
}

/// Pairs `(n, m)` along which `f1^n(w1)` and `f2^m(w2)` approach the ray from
/// the common fixed point in direction `ray` with modulus ratio tending to 1.
/// With `ray = None` the direction of `w1` is used.
///
/// Residual: `|log(|f1^n w1 - c| / |f2^m w2 - c|)| + angle(f1^n w1, ray) +
/// angle(f2^m w2, ray)`.
pub fn cone_sequence(
    f1: &Similarity3,
    f2: &Similarity3,
    w1: Vec3,
    w2: Vec3,
    ray: Option<Vec3>,
    eps: f64,
    max_n: u64,
) -> Result<ApproxSeq> {
    let s1 = spiral_of(f1)?;
    let s2 = spiral_of(f2)?;
    let scale = 1.0 + s1.centre.norm().max(w1.dist(s1.centre));
    if s1.centre.dist(s2.centre) > 1e-9 * scale {
        return invalid("maps do not share a fixed point");
    }
    for (s, w) in [(&s1, w1), (&s2, w2)] {
        let v = w - s.centre;
        if v.cross(s.axis).norm() <= 1e-12 * (1.0 + v.norm()) {
            return invalid("orbit point lies on the rotation axis");
        }
    }
    let ray = match ray {
        Some(r) => r.normalized().ok_or_else(|| Error::InvalidInput("zero ray".into()))?,
        None => (w1 - s1.centre).normalized().unwrap(),
    };
    let best: Vec<(u64, f64, f64)> = (0..=max_n)
        .into_par_iter()
        .map(|n| {
            let (d1, l1) = s1.orbit(w1, n);
            let a1 = d1.angle(ray);
            let l2_0 = (w2 - s2.centre).norm().ln();
            // |l1 - l2_0 - m log r2| + a1 + angle_m
            let (m, r) = best_m(l1 - l2_0, s2.log_ratio, max_n, |m| a1 + s2.orbit(w2, m).0.angle(ray));
            (m, r, f64::NAN)
        })
        .collect();
    let mut seq = ApproxSeq::from_best(best, eps, max_n);
    seq.deviations.clear();
    Ok(seq)
}

// ------------------------------------------------------------------ tuning

/// Input of [`tune_pair`]: both generators `base * e^{i turn/n}`-like, with
/// an exact simultaneous hit at step `n`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TuneSpec {
    /// Modulus of the first generator.
    pub base: f64,
    /// Allowed distance of either generator from `base`.
    pub radius: f64,
    /// Total turn of the first generator at the hit.
    pub turn_xi: f64,
    /// Total turn of the second generator at the hit.
    pub turn_eta: f64,
    /// `n (log|eta| - log|xi|)` at the hit, before detuning.
    pub log_gap: f64,
    /// Relative modulus detuning of the second generator, breaking exact
    /// commensurability.
    pub detune: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub grid: usize,
    pub eps: f64,
    pub max_n: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TunedPair {
    pub pair: GenPair,
    pub hit: u64,
    pub coverage: PhaseCoverage,
}

/// Generators `xi = base e^{i turn_xi / n}`, `eta = base e^{log_gap / n}
/// (1 + detune) e^{i turn_eta / n}` for the smallest `n` in range keeping both
/// within `radius` of `base` and showing second-type phase coverage.
pub fn tune_pair(spec: &TuneSpec) -> Result<TunedPair> {
    if !(spec.base > 0.0 && spec.radius > 0.0 && spec.n_min >= 1 && spec.n_min <= spec.n_max) {
        return invalid("bad tuning specification");
    }
    let targets = phase_grid(spec.grid);
    for n in spec.n_min..=spec.n_max {
        let xi = Complex64::from_polar(spec.base, spec.turn_xi / n as f64);
        let eta = Complex64::from_polar(
            spec.base * (spec.log_gap / n as f64).exp() * (1.0 + spec.detune),
            spec.turn_eta / n as f64,
        );
        if (xi - spec.base).norm() > spec.radius || (eta - spec.base).norm() > spec.radius {
            continue;
        }
        let pair = GenPair::new(xi, eta)?;
        let coverage = phase_coverage(&pair, &targets, spec.eps, spec.max_n);
        if coverage.verdict == Evidence::SecondType {
            return Ok(TunedPair { pair, hit: n, coverage });
        }
    }
    Err(Error::Hypothesis("no admissible step shows second-type coverage".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn coefficients() {
        let u = Complex64::new(1.0, 1.0);
        let v = Complex64::new(1.5, -1.5);
        let (a, b) = solve_coefficients(u, v).unwrap();
        assert!((a - 0.5).abs() < 1e-15 && (b - 1.0 / 3.0).abs() < 1e-15);
        assert!(solve_coefficients(Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn best_m_scans_outward() {
        let (m, r) = best_m(5.3, 1.0, 100, |_| 0.0);
        assert_eq!(m, 5);
        assert!((r - 0.3).abs() < 1e-12);
        let (m, _) = best_m(5.3, 1.0, 3, |_| 0.0);
        assert_eq!(m, 3);
    }
}
