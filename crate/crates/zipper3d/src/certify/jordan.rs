use super::gap::{min_gap_search, near_pairs, GapSearch};
use crate::error::{invalid, Result};
use crate::family::{bicone_structure, build_bicones, build_zipper, enumerate_sigma, FamilyConfig, ParamXi, SigmaSeq};
use crate::geom::{Similarity3, Vec3};
use crate::zipper::{address_of, cylinder_map_unchecked, eval_address, root_ball, Address, Zipper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::Write;

/// The k-th piece pair `S_{m+1} S_1^i (gamma_A)`, `S_m S_{2m}^j (gamma_B)`,
/// each given as the three cylinders making it up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecePair {
    pub k: usize,
    pub i: u64,
    pub j: u64,
    pub a: Vec<Address>,
    pub b: Vec<Address>,
}

pub fn piece_pair(m: usize, k: usize, i: u64, j: u64) -> PiecePair {
    let m32 = m as u32;
    let make = |head: u32, rep: u32, n: u64, tails: [u32; 3]| {
        tails
            .iter()
            .map(|&t| {
                let mut d = vec![head];
                d.extend(std::iter::repeat(rep).take(n as usize));
                d.push(t);
                Address::new(d)
            })
            .collect()
    };
    PiecePair {
        k,
        i,
        j,
        a: make(m32 + 1, 1, i, [m32 - 4, m32 - 3, m32 - 2]),
        b: make(m32, 2 * m32, j, [m32 + 3, m32 + 4, m32 + 5]),
    }
}

/// Piece pairs of the intersection `S_m(gamma) n S_{m+1}(gamma)` together with
/// a sampled check of where `gamma` leaves the interior of the inner bicone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub pairs: Vec<PiecePair>,
    /// Sampled parameters (endpoints excluded).
    pub samples: usize,
    /// Samples strictly outside the inner bicone.
    pub outside: usize,
    /// Addresses of outside samples not of the form `1^n a` or `(2m)^n b`.
    pub violations: Vec<Address>,
}

/// Digits that start the allowed outside regions: `1^n d` or `(2m)^n e`.
fn in_end_regions(m: u32, digits: &[u32]) -> bool {
    let after = |r: u32, tails: std::ops::RangeInclusive<u32>| {
        let n = digits.iter().take_while(|&&d| d == r).count();
        digits.get(n).map_or(false, |d| tails.contains(d))
    };
    after(1, m - 4..=m - 2) || after(2 * m, m + 3..=m + 5)
}

/// Lists the pairs for every `(i_k, j_k)` with `i_k, j_k <= k_max`, and checks
/// `samples` random parameters of `gamma`.
pub fn decompose_intersection(
    cfg: &FamilyConfig,
    xi: ParamXi,
    k_max: u64,
    samples: usize,
    seed: u64,
) -> Result<Decomposition> {
    let sigma = enumerate_sigma(cfg, k_max)?;
    let z = build_zipper(cfg, xi)?;
    let v1 = build_bicones(cfg, xi)?.root1;
    let t = cfg.linear_zipper()?;
    let m = cfg.m as u32;
    let pairs = sigma.pairs.iter().enumerate().map(|(n, &(i, j))| piece_pair(cfg.m, n + 1, i, j)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let us: Vec<f64> = (0..samples).map(|_| rng.gen_range(1e-9..1.0 - 1e-9)).collect();
    let hits: Vec<(bool, Option<Address>)> = us
        .par_iter()
        .map(|&u| {
            let (a, _, odd) = address_of(&t, u, 40);
            let x = eval_address(&z, a.digits(), odd);
            if v1.excess(x) <= 1e-12 * v1.axis_length() {
                return (false, None);
            }
            let bad = (!in_end_regions(m, a.digits())).then(|| Address::new(a.digits()[..8].to_vec()));
            (true, bad)
        })
        .collect();
    Ok(Decomposition {
        pairs,
        samples,
        outside: hits.iter().filter(|h| h.0).count(),
        violations: hits.into_iter().filter_map(|h| h.1).collect(),
    })
}

/// Near pairs of `S_m(gamma)` and `S_{m+1}(gamma)` away from `z_m` that fall
/// outside every listed piece pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coverage {
    pub eps: f64,
    /// Leaf pairs with both balls inside this ball about `z_m` are exempt.
    pub centre_radius: f64,
    pub max_depth: usize,
    pub leaves: usize,
    pub uncovered: Vec<(Address, Address)>,
    pub truncated: bool,
}

/// Whether every point of the ball `(c, r)` is within `eps` of some point of
/// the union of the cylinders `pieces`, found by refining the cylinders near
/// `c` down to address length `max_depth`.
fn within(z: &Zipper, c: Vec3, r: f64, pieces: &[Address], eps: f64, max_depth: usize) -> bool {
    let (c0, r0) = root_ball(z);
    let mut stack: Vec<(usize, Similarity3)> =
        pieces.iter().map(|a| (a.len(), cylinder_map_unchecked(z, a.digits()))).collect();
    while let Some((len, s)) = stack.pop() {
        // no point of this cylinder is within eps - r of c
        if c.dist(s.apply(c0)) - s.ratio * r0 > eps - r {
            continue;
        }
        if c.dist(s.apply(z.vertices[0])) + r <= eps {
            return true;
        }
        if len < max_depth {
            stack.extend((1..=z.m()).map(|d| (len + 1, s.compose(z.map(d)))));
        }
    }
    false
}

/// Enumerates ball pairs of the two halves closer than `eps`, with radii
/// below `eps / 2` where the address length `max_depth` allows, and checks
/// that each lies within `eps` of a pair from `sigma` unless both are within
/// `centre_radius` of `z_m`. The two halves leave `z_m` inside nearly tangent
/// cones, so near `z_m` they stay within `eps` of each other over a distance
/// of several `eps`; `centre_radius` should cover that stretch.
pub fn intersection_coverage(
    z: &Zipper,
    m: usize,
    sigma: &SigmaSeq,
    eps: f64,
    centre_radius: f64,
    max_depth: usize,
) -> Coverage {
    let zm = z.vertices[m];
    let near_centre = |p: &super::ArcPiece, q: &super::ArcPiece| {
        p.center.dist(zm) + p.radius <= centre_radius && q.center.dist(zm) + q.radius <= centre_radius
    };
    // leaves closer than eps/2 with radii below eps/2
    let (leaves, truncated) = near_pairs(
        z,
        &Address::new(vec![m as u32 + 1]),
        &Address::new(vec![m as u32]),
        eps / 2.0,
        max_depth,
        &near_centre,
    );
    let allowed: BTreeSet<(u64, u64)> = sigma.pairs.iter().copied().collect();
    let m32 = m as u32;
    let split = |d: &[u32], rep: u32, tails: std::ops::RangeInclusive<u32>| -> Option<u64> {
        let n = d[1..].iter().take_while(|&&x| x == rep).count();
        d.get(1 + n).filter(|t| tails.contains(t)).map(|_| n as u64)
    };
    let covered = |p: &super::ArcPiece, q: &super::ArcPiece| {
        let i = split(p.address.digits(), 1, m32 - 4..=m32 - 2);
        let j = split(q.address.digits(), 2 * m32, m32 + 3..=m32 + 5);
        if matches!((i, j), (Some(i), Some(j)) if allowed.contains(&(i, j))) {
            return true;
        }
        sigma.pairs.iter().enumerate().any(|(n, &(i, j))| {
            let pp = piece_pair(m, n + 1, i, j);
            within(z, p.center, p.radius, &pp.a, eps, max_depth) && within(z, q.center, q.radius, &pp.b, eps, max_depth)
        })
    };
    let uncovered = leaves
        .par_iter()
        .filter(|(p, q)| !covered(p, q))
        .map(|(p, q)| (p.address.clone(), q.address.clone()))
        .collect();
    Coverage { eps, centre_radius, max_depth, leaves: leaves.len(), uncovered, truncated }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub k: usize,
    pub pair: (u64, u64),
    /// Certified lower bound on the distance between the two pieces, 0 if
    /// undecided.
    pub lower_gap: f64,
    pub depth_used: usize,
    pub certified: bool,
    pub min_margin: f64,
    pub nodes: u64,
}

/// Separation search over the nine cylinder pairs of the k-th piece pair.
pub fn pair_gap(z: &Zipper, pair: &PiecePair, max_depth: usize) -> GapReport {
    let searches: Vec<GapSearch> = pair
        .a
        .par_iter()
        .flat_map_iter(|a| pair.b.iter().map(move |b| (a, b)))
        .map(|(a, b)| min_gap_search(z, a, b, max_depth))
        .collect();
    let g = searches.into_iter().reduce(GapSearch::combine).expect("nine pairs");
    GapReport {
        k: pair.k,
        pair: (pair.i, pair.j),
        lower_gap: g.lower_gap,
        depth_used: g.depth_used,
        certified: g.certified,
        min_margin: g.min_margin,
        nodes: g.nodes,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JordanCert {
    pub xi: ParamXi,
    pub checked_k: usize,
    pub max_depth: usize,
    /// Every piece pair with `k <= checked_k` is certified disjoint.
    pub all_gaps_positive: bool,
    /// The sampled bicone conditions hold.
    pub structural_a1a3: bool,
    /// Smallest certified gap; `None` when no pair was checked.
    pub min_gap: Option<f64>,
    pub gaps: Vec<GapReport>,
    pub caveat: String,
}

pub fn jordan_check(cfg: &FamilyConfig, xi: ParamXi, k_checked: usize, max_depth: usize) -> Result<JordanCert> {
    let z = build_zipper(cfg, xi)?;
    let structural = bicone_structure(cfg, &build_bicones(cfg, xi)?)?.iter().all(|c| c.pass);
    let sigma = enumerate_sigma(cfg, 2 * k_checked as u64 + 2)?;
    if sigma.len() < k_checked {
        return invalid(format!("only {} pairs available, {k_checked} requested", sigma.len()));
    }
    let gaps: Vec<GapReport> = sigma.pairs[..k_checked]
        .par_iter()
        .enumerate()
        .map(|(n, &(i, j))| pair_gap(&z, &piece_pair(cfg.m, n + 1, i, j), max_depth))
        .collect();
    let all = gaps.iter().all(|g| g.certified);
    let min_gap = (!gaps.is_empty()).then(|| gaps.iter().map(|g| g.lower_gap).fold(f64::INFINITY, f64::min));
    Ok(JordanCert {
        xi,
        checked_k: k_checked,
        max_depth,
        all_gaps_positive: all,
        structural_a1a3: structural,
        min_gap,
        gaps,
        caveat: format!(
            "finite check: piece pairs 1..={k_checked} at address length <= {max_depth}; pairs beyond {k_checked} \
             are not examined and the bicone conditions are sampled, so this is not a proof that the curve is a Jordan arc"
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub xi: ParamXi,
    pub min_gap: Option<f64>,
    pub all_gaps_positive: bool,
    pub structural: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub dims: (usize, usize, usize),
    pub k_checked: usize,
    pub max_depth: usize,
    /// Grid cell centres, `rho` slowest.
    pub rows: Vec<ScanRow>,
    pub positive: usize,
    pub fraction_positive: f64,
    /// Row with the largest certified gap.
    pub best: Option<usize>,
}

impl ScanReport {
    /// CSV with header `rho,theta,phi,min_gap`; an unchecked gap is left empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "rho,theta,phi,min_gap")?;
        for r in &self.rows {
            let g = r.min_gap.map(|g| g.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{}", r.xi.rho, r.xi.theta, r.xi.phi, g)?;
        }
        Ok(())
    }
}

/// [`jordan_check`] at every cell centre of the grid; rows come back in grid
/// order whatever the thread count.
pub fn scan_d(cfg: &FamilyConfig, dims: (usize, usize, usize), k_checked: usize, max_depth: usize) -> Result<ScanReport> {
    if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
        return invalid("grid dimensions must be positive");
    }
    let grid = cfg.domain().grid(dims);
    let rows = grid
        .par_iter()
        .map(|&xi| {
            jordan_check(cfg, xi, k_checked, max_depth).map(|c| ScanRow {
                xi,
                min_gap: c.min_gap,
                all_gaps_positive: c.all_gaps_positive,
                structural: c.structural_a1a3,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let positive = rows.iter().filter(|r| r.all_gaps_positive && r.structural && r.min_gap.is_some()).count();
    let best = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.all_gaps_positive && r.min_gap.is_some())
        .max_by(|a, b| a.1.min_gap.partial_cmp(&b.1.min_gap).unwrap().then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    Ok(ScanReport {
        dims,
        k_checked,
        max_depth,
        fraction_positive: positive as f64 / rows.len() as f64,
        positive,
        rows,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn end_regions() {
        let m = 12;
        assert!(in_end_regions(m, &[1, 1, 8, 3]));
        assert!(in_end_regions(m, &[10, 5]));
        assert!(in_end_regions(m, &[24, 24, 16, 1]));
        assert!(!in_end_regions(m, &[1, 1, 7]));
        assert!(!in_end_regions(m, &[24, 14]));
        assert!(!in_end_regions(m, &[5]));
    }
}
