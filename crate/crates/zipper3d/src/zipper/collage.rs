use super::Address;
use crate::error::{invalid, Error, Result};
use crate::geom::{chain, Similarity3, Vec3};
use serde::{Deserialize, Serialize};

/// Two-sided bound from the collage estimates. Hypotheses are checked on
/// the probe only, so `sampled` is always true.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollageBound {
    pub lower: f64,
    pub upper: f64,
    /// `max_i max_probe |T_i(x) - S_i(x)|`.
    pub delta: f64,
    /// Largest ratio over both systems.
    pub q: f64,
    /// The error term subtracted from `d1` and added to `d2`.
    pub slack: f64,
    pub sampled: bool,
}

fn composite(maps: &[Similarity3], a: &Address) -> Result<Similarity3> {
    a.check(maps.len())?;
    let seq: Vec<Similarity3> = a.digits().iter().map(|&d| maps[d as usize - 1]).collect();
    Ok(chain(&seq))
}

fn common_checks(s: &[Similarity3], t: &[Similarity3], probe: &[Vec3]) -> Result<(f64, f64)> {
    if s.len() != t.len() || s.is_empty() {
        return invalid("systems must have the same positive number of maps");
    }
    if probe.is_empty() {
        return invalid("empty probe set");
    }
    let q = s.iter().chain(t).map(|m| m.ratio).fold(0.0, f64::max);
    if q >= 1.0 {
        return invalid("maps must be contractions");
    }
    let delta = s
        .iter()
        .zip(t)
        .flat_map(|(a, b)| probe.iter().map(move |&x| b.apply(x).dist(a.apply(x))))
        .fold(0.0, f64::max);
    Ok((q, delta))
}

/// Bounds on `|psi(sigma) - phi(sigma)|` for addresses `sigma` starting with
/// `j`, where `phi`, `psi` are the address maps of `s` and `t`.
pub fn collage_b1(
    s: &[Similarity3],
    t: &[Similarity3],
    probe: &[Vec3],
    j: &Address,
    d1: f64,
    d2: f64,
) -> Result<CollageBound> {
    let (q, delta) = common_checks(s, t, probe)?;
    let sj = composite(s, j)?;
    let tj = composite(t, j)?;
    let slack = sj.ratio * delta / (1.0 - q);
    let (lo, hi) = probe.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| {
        let d = tj.apply(x).dist(sj.apply(x));
        (lo.min(d), hi.max(d))
    });
    if !(d1 < lo && hi < d2) {
        return Err(Error::Hypothesis(format!(
            "need d1 < |Delta_j| < d2 on the probe; observed range [{lo}, {hi}]"
        )));
    }
    if d1 <= slack {
        return Err(Error::Hypothesis(format!("bound vacuous: d1 = {d1} <= {slack}")));
    }
    Ok(CollageBound { lower: d1 - slack, upper: d2 + slack, delta, q, slack, sampled: true })
}

/// Bounds on `|psi(sigma) - phi(sigma) - psi(tau) + phi(tau)|` for `sigma`
/// in the `i`-cylinder and `tau` in the `j`-cylinder.
pub fn collage_b2(
    s: &[Similarity3],
    t: &[Similarity3],
    probe: &[Vec3],
    i: &Address,
    j: &Address,
    d1: f64,
    d2: f64,
) -> Result<CollageBound> {
    let (q, delta) = common_checks(s, t, probe)?;
    let (si, ti) = (composite(s, i)?, composite(t, i)?);
    let (sj, tj) = (composite(s, j)?, composite(t, j)?);
    let slack = (si.ratio + sj.ratio) * delta / (1.0 - q);
    let di: Vec<Vec3> = probe.iter().map(|&x| ti.apply(x) - si.apply(x)).collect();
    let dj: Vec<Vec3> = probe.iter().map(|&x| tj.apply(x) - sj.apply(x)).collect();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for a in &di {
        for b in &dj {
            let d = (*a - *b).norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    if !(d1 < lo && hi < d2) {
        return Err(Error::Hypothesis(format!(
            "need d1 < |Delta_i(x) - Delta_j(y)| < d2 on the probe; observed range [{lo}, {hi}]"
        )));
    }
    if d1 <= slack {
        return Err(Error::Hypothesis(format!("bound vacuous: d1 = {d1} <= {slack}")));
    }
    Ok(CollageBound { lower: d1 - slack, upper: d2 + slack, delta, q, slack, sampled: true })
}
