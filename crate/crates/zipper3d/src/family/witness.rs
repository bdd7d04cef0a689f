use super::build::bicones_from_vertices;
use super::{beta0, build_zipper, FamilyConfig, ParamXi, SigmaSeq};
use crate::cstar::{cone_sequence, ApproxSeq};
use crate::error::{invalid, Error, Result};
use crate::geom::{identity_distance, Similarity3, Vec3};
use crate::zipper::Zipper;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WspWitness {
    pub i: u64,
    pub j: u64,
    pub map: Similarity3,
    /// Largest displacement over the probe of `V`.
    pub dist: f64,
}

/// `M = (S_m S_{2m}^j S_{m+4})^{-1} (S_{m+1} S_1^i S_{m-3})`. Both factors
/// send `P = S_{m-3}^{-1}(z_0) = S_{m+4}^{-1}(z_{2m})` to `z_m`, so `M`
/// fixes `P`.
pub fn witness_map(cfg: &FamilyConfig, xi: ParamXi, i: u64, j: u64) -> Result<WspWitness> {
    let z = build_zipper(cfg, xi)?;
    let probe = bicones_from_vertices(cfg, &z.vertices)?.root.probe(cfg.probe_points, cfg.seed);
    witness_on(&z, cfg.m, &probe, i, j)
}

/// [`witness_map`] at the k-th pair (1-based) of `sigma`.
pub fn wsp_witness(cfg: &FamilyConfig, xi: ParamXi, sigma: &SigmaSeq, k: usize) -> Result<WspWitness> {
    match sigma.get(k) {
        Some((i, j)) => witness_map(cfg, xi, i, j),
        None => invalid(format!("k = {k} outside the enumerated pairs (1..={})", sigma.len())),
    }
}

fn witness_on(z: &Zipper, m: usize, probe: &[Vec3], i: u64, j: u64) -> Result<WspWitness> {
    let left = z.map(m).compose(&z.map(2 * m).powi(j)).compose(z.map(m + 4));
    let right = z.map(m + 1).compose(&z.map(1).powi(i)).compose(z.map(m - 3));
    let map = left.inverse().compose(&right);
    Ok(WspWitness { i, j, dist: identity_distance(&map, probe)?, map })
}

/// The two spiral maps at `z_m` and their orbit seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeSetup {
    /// `S_m S_{2m} S_m^{-1}`.
    pub f1: Similarity3,
    /// `S_{m+1} S_1 S_{m+1}^{-1}`.
    pub f2: Similarity3,
    /// `S_m S_{m+4}(Q)`, `Q = z_{2m}`.
    pub w1: Vec3,
    /// `S_{m+1} S_{m-3}(Q)`.
    pub w2: Vec3,
    /// Common generators of the cones `S_m(V0)`, `S_{m+1}(V0)` at `z_m`.
    pub rays: Vec<Vec3>,
}

pub fn cone_setup(cfg: &FamilyConfig, xi: ParamXi) -> Result<ConeSetup> {
    let z = build_zipper(cfg, xi)?;
    let m = cfg.m;
    let (sm, sm1) = (z.map(m), z.map(m + 1));
    let q = z.vertices[2 * m];
    let a1 = (z.vertices[m - 1] - z.vertices[m]).normalized().unwrap();
    let a2 = (z.vertices[m + 1] - z.vertices[m]).normalized().unwrap();
    let c = a1.dot(a2);
    let x = beta0().cos() / (1.0 + c);
    let n = a1.cross(a2);
    let h = 1.0 - 2.0 * x * x * (1.0 + c);
    if h < 0.0 || n.norm() == 0.0 {
        return Err(Error::Degenerate("cones have no common generator".into()));
    }
    let base = (a1 + a2) * x;
    let off = n * (h.sqrt() / n.norm());
    Ok(ConeSetup {
        f1: sm.compose(z.map(2 * m)).compose(&sm.inverse()),
        f2: sm1.compose(z.map(1)).compose(&sm1.inverse()),
        w1: sm.compose(z.map(m + 4)).apply(q),
        w2: sm1.compose(z.map(m - 3)).apply(q),
        rays: vec![base + off, base - off],
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessScan {
    /// Index into [`ConeSetup::rays`] of the generator used.
    pub ray: usize,
    pub cone: ApproxSeq,
    /// `(i, j, dist)` for every pair suggested by the cone scan.
    pub candidates: Vec<(u64, u64, f64)>,
    /// Record minima of `dist` along the candidates.
    pub records: Vec<(u64, u64, f64)>,
}

impl WitnessScan {
    pub fn best(&self) -> Option<(u64, u64, f64)> {
        self.records.last().copied()
    }
}

/// Runs the cone scan toward each common generator (keeping the one with the
/// smaller final residual) and evaluates the witness map at each suggested
/// pair. The scan's `(n, m)` are the powers of `f1`, `f2`, i.e. `j` and `i`.
pub fn wsp_search(cfg: &FamilyConfig, xi: ParamXi, eps: f64, max_n: u64) -> Result<WitnessScan> {
    let setup = cone_setup(cfg, xi)?;
    let mut best: Option<(usize, ApproxSeq)> = None;
    for (r, &ray) in setup.rays.iter().enumerate() {
        let seq = cone_sequence(&setup.f1, &setup.f2, setup.w1, setup.w2, Some(ray), eps, max_n)?;
        let better = match &best {
            None => true,
            Some((_, b)) => seq.final_residual().unwrap_or(f64::INFINITY) < b.final_residual().unwrap_or(f64::INFINITY),
        };
        if better {
            best = Some((r, seq));
        }
    }
    let (ray, cone) = best.expect("two rays");
    let z = build_zipper(cfg, xi)?;
    let probe = bicones_from_vertices(cfg, &z.vertices)?.root.probe(cfg.probe_points, cfg.seed);
    let candidates = cone
        .pairs
        .par_iter()
        .map(|&(n, mm)| witness_on(&z, cfg.m, &probe, mm, n).map(|w| (w.i, w.j, w.dist)))
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<(u64, u64, f64)> = Vec::new();
    for &c in &candidates {
        if records.last().map_or(true, |r| c.2 < r.2) {
            records.push(c);
        }
    }
    Ok(WitnessScan { ray, cone, candidates, records })
}
