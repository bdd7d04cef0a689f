use super::{Address, LinearZipper, Polyline, Zipper};
use crate::error::{invalid, Error, Result};
use crate::geom::{Similarity3, Vec3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Vertex residuals of a zipper.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Per map: `(|S_i(z_0) - z_{i-1+eps_i}|, |S_i(z_m) - z_{i-eps_i}|)`.
    pub residuals: Vec<(f64, f64)>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn validate(z: &Zipper, tol: f64) -> Result<ValidationReport> {
    z.check_structure()?;
    let m = z.m();
    let residuals: Vec<(f64, f64)> = (1..=m)
        .map(|i| {
            let e = z.signature.eps(i);
            let s = z.map(i);
            (
                s.apply(z.vertices[0]).dist(z.vertices[i - 1 + e]),
                s.apply(z.vertices[m]).dist(z.vertices[i - e]),
            )
        })
        .collect();
    let max_residual = residuals.iter().map(|r| r.0.max(r.1)).fold(0.0, f64::max);
    Ok(ValidationReport { residuals, max_residual, tol, pass: max_residual < tol })
}

/// `S_a = S_{a_1} o ... o S_{a_k}`.
pub fn cylinder_map(z: &Zipper, a: &Address) -> Result<Similarity3> {
    a.check(z.m())?;
    Ok(cylinder_map_unchecked(z, a.digits()))
}

pub(crate) fn cylinder_map_unchecked(z: &Zipper, digits: &[u32]) -> Similarity3 {
    digits.iter().fold(Similarity3::IDENTITY, |acc, &d| acc.compose(z.map(d as usize)))
}

/// Image of `z_0` (`last = false`) or `z_m` (`last = true`) under `S_a`.
///
/// Endpoint images are tracked symbolically while they stay vertices, so
/// vertex points come out bit-exact.
pub fn eval_address(z: &Zipper, digits: &[u32], last: bool) -> Vec3 {
    let m = z.m();
    let mut vertex = Some(if last { m } else { 0 });
    let mut point = Vec3::ZERO;
    for &d in digits.iter().rev() {
        let d = d as usize;
        match vertex {
            Some(v) if v == 0 || v == m => {
                let e = z.signature.eps(d);
                vertex = Some(if v == 0 { d - 1 + e } else { d - e });
            }
            Some(v) => {
                point = z.map(d).apply(z.vertices[v]);
                vertex = None;
            }
            None => point = z.map(d).apply(point),
        }
    }
    match vertex {
        Some(v) => z.vertices[v],
        None => point,
    }
}

/// Digits of `u` under `t`, the remainder in the last cylinder's domain
/// coordinates, and the reversal parity.
pub fn address_of(t: &LinearZipper, u: f64, depth: usize) -> (Address, f64, bool) {
    let m = t.m();
    let mut digits = Vec::with_capacity(depth);
    let mut r = u.clamp(0.0, 1.0);
    let mut odd = false;
    for _ in 0..depth {
        // largest i with t_{i-1} <= r
        let mut i = 1;
        while i < m && t.breakpoint(i) <= r {
            i += 1;
        }
        let p = t.ratios[i - 1];
        r = if t.signature.eps(i) == 0 {
            (r - t.breakpoint(i - 1)) / p
        } else {
            (t.breakpoint(i) - r) / p
        }
        .clamp(0.0, 1.0);
        odd ^= t.signature.eps(i) == 1;
        digits.push(i as u32);
    }
    (Address(digits), r, odd)
}

fn check_pair(z: &Zipper, t: &LinearZipper) -> Result<()> {
    if z.signature != t.signature {
        return Err(Error::InvalidInput("zipper and linear zipper signatures differ".into()));
    }
    Ok(())
}

/// Approximation of `phi(u)` from `depth` digits of `u`; the error is at most
/// `diam(gamma) * max_ratio^depth`.
pub fn parametrize(z: &Zipper, t: &LinearZipper, u: f64, depth: usize) -> Result<Vec3> {
    check_pair(z, t)?;
    if !(0.0..=1.0).contains(&u) {
        return invalid(format!("parameter {u} outside [0,1]"));
    }
    if u == 0.0 || u == 1.0 {
        return Ok(eval_address(z, &[], u == 1.0));
    }
    let (a, r, odd) = address_of(t, u, depth);
    // left end of the cylinder's parameter interval, unless u sits exactly on
    // its right end
    let last = if odd { r > 0.0 } else { r >= 1.0 };
    Ok(eval_address(z, a.digits(), last))
}

/// `S_prefix(phi(u))`, evaluated through the address so no parameter
/// precision is lost inside deep cylinders.
pub fn parametrize_in(z: &Zipper, t: &LinearZipper, prefix: &Address, u: f64, depth: usize) -> Result<Vec3> {
    check_pair(z, t)?;
    prefix.check(z.m())?;
    if u == 0.0 || u == 1.0 {
        return Ok(eval_address(z, prefix.digits(), u == 1.0));
    }
    let (a, r, odd) = address_of(t, u, depth);
    let last = if odd { r > 0.0 } else { r >= 1.0 };
    let full = a.prepend(prefix);
    Ok(eval_address(z, full.digits(), last))
}

/// Left endpoints of all depth-`depth` cylinders in parameter order, plus the
/// final point `(1, z_m)`.
pub fn refine(z: &Zipper, t: &LinearZipper, depth: usize) -> Result<Polyline> {
    check_pair(z, t)?;
    let m = z.m();
    fn walk(
        z: &Zipper,
        t: &LinearZipper,
        prefix: &mut Vec<u32>,
        reversed: bool,
        left: usize,
        out: &mut Vec<(f64, Vec3)>,
    ) {
        let m = z.m();
        if left == 0 {
            let (lo, _) = t.apply_interval(&Address(prefix.clone()), 0.0, 1.0);
            out.push((lo, eval_address(z, prefix, reversed)));
            return;
        }
        let order: Vec<usize> = if reversed { (1..=m).rev().collect() } else { (1..=m).collect() };
        for i in order {
            prefix.push(i as u32);
            walk(z, t, prefix, reversed ^ (z.signature.eps(i) == 1), left - 1, out);
            prefix.pop();
        }
    }
    let mut points = if depth == 0 {
        vec![(0.0, z.first())]
    } else {
        (1..=m)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                let mut prefix = vec![i as u32];
                walk(z, t, &mut prefix, z.signature.eps(i) == 1, depth - 1, &mut out);
                out
            })
            .collect::<Vec<_>>()
            .concat()
    };
    points.push((1.0, z.last()));
    Ok(Polyline { points })
}

/// `min_i log(q_i) / log(p_i)`.
pub fn holder_exponent(z: &Zipper, t: &LinearZipper) -> Result<f64> {
    holder_exponent_from_ratios(&z.ratios(), &t.ratios)
}

pub fn holder_exponent_from_ratios(q: &[f64], p: &[f64]) -> Result<f64> {
    if q.len() != p.len() || q.is_empty() {
        return invalid("ratio lists must be non-empty and of equal length");
    }
    if q.iter().chain(p).any(|&x| !(x > 0.0 && x < 1.0)) {
        return invalid("all ratios must lie in (0,1)");
    }
    Ok(q.iter().zip(p).map(|(a, b)| a.ln() / b.ln()).fold(f64::INFINITY, f64::min))
}

/// Index (1-based) attaining the minimum in [`holder_exponent`].
pub fn holder_critical_index(q: &[f64], p: &[f64]) -> usize {
    let mut best = (f64::INFINITY, 1);
    for (i, (a, b)) in q.iter().zip(p).enumerate() {
        let r = a.ln() / b.ln();
        if r < best.0 {
            best = (r, i + 1);
        }
    }
    best.1
}

/// The unique `s > 0` with `sum q_i^s = 1`.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return invalid("empty ratio list");
    }
    if ratios.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
        return invalid("ratios must lie in (0,1)");
    }
    let f = |s: f64| ratios.iter().map(|q| q.powf(s)).sum::<f64>() - 1.0;
    let df = |s: f64| ratios.iter().map(|q| q.powf(s) * q.ln()).sum::<f64>();
    let (mut lo, mut hi) = (1e-6, 64.0);
    if f(lo) <= 0.0 {
        return Err(Error::InvalidInput("no positive solution (single map?)".into()));
    }
    if f(hi) >= 0.0 {
        return Err(Error::InvalidInput("dimension exceeds 64".into()));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = df(s);
        if d != 0.0 {
            let next = s - f(s) / d;
            if next.is_finite() && (next - s).abs() < 1e-10 {
                s = next;
            }
        }
    }
    Ok(s)
}

/// A ball guaranteed to contain the attractor: centred at the midpoint of
/// `z_0 z_m`, with radius large enough that every `S_i` maps it into itself.
pub fn root_ball(z: &Zipper) -> (Vec3, f64) {
    let c = z.first().lerp(z.last(), 0.5);
    let r = z
        .maps
        .iter()
        .map(|s| s.apply(c).dist(c) / (1.0 - s.ratio))
        .fold(z.first().dist(c), f64::max);
    // slack for rounding in the comparisons downstream
    (c, r * (1.0 + 1e-12))
}

/// Upper bound on `diam(gamma)`.
pub fn diameter_bound(z: &Zipper) -> f64 {
    2.0 * root_ball(z).1
}
