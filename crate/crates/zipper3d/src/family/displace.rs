use super::sets::probe_union;
use super::{beta0, build_zipper, sets_ab, FamilyConfig, ParamXi, SigmaSeq};
use crate::error::{invalid, Result};
use crate::geom::{Frame, Similarity3, Vec3};
use crate::report::Check;
use crate::zipper::{eval_address, Zipper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Absolute slack for comparisons that are exact when `xi = eta`.
const SLACK: f64 = 1e-13;

/// `F = S^eta_{m+1} o (S^xi_{m+1})^{-1}`.
pub fn transition_map(cfg: &FamilyConfig, xi: ParamXi, eta: ParamXi) -> Result<Similarity3> {
    let a = build_zipper(cfg, xi)?;
    let b = build_zipper(cfg, eta)?;
    Ok(b.map(cfg.m + 1).compose(&a.map(cfg.m + 1).inverse()))
}

/// Spherical frame at `z_m` with polar axis `z_m z_{m+1}` and azimuth measured
/// from the in-plane normal on the side of `z_{m-1}`.
pub fn xi_frame(xi: ParamXi) -> Frame {
    let (s, c) = xi.theta.sin_cos();
    Frame::new(Vec3::ZERO, Vec3::xy(s, c), Vec3::xy(-c, s)).expect("orthogonal by construction")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisplacementReport {
    /// 1-based index into the pair sequence.
    pub k: usize,
    pub pair: (u64, u64),
    pub delta_star: f64,
    pub r_k: f64,
    pub delta_k: f64,
    pub xi_dist: f64,
    /// Largest `|S_i^xi(x) - S_i^eta(x)|` over all maps and the probe of `V`.
    pub max_displacement: f64,
    /// Coordinates of `x_k^xi` in the xi-frame.
    pub point_radius: f64,
    pub point_azimuth: f64,
    pub point_polar: f64,
    pub checks: Vec<Check>,
}

fn max_shift(a: &Similarity3, b: &Similarity3, probe: &[Vec3]) -> f64 {
    probe.iter().map(|&x| a.apply(x).dist(b.apply(x))).fold(0.0, f64::max)
}

/// Displacement estimates between `S_xi` and `S_eta` for the k-th pair.
pub fn displacement_report(
    cfg: &FamilyConfig,
    xi: ParamXi,
    eta: ParamXi,
    sigma: &SigmaSeq,
    k: usize,
) -> Result<DisplacementReport> {
    let (i_k, j_k) = match sigma.get(k) {
        Some(p) => p,
        None => return invalid(format!("k = {k} outside the enumerated pairs (1..={})", sigma.len())),
    };
    let m = cfg.m;
    let za = build_zipper(cfg, xi)?;
    let zb = build_zipper(cfg, eta)?;
    let s1_pow = za.map(1).powi(i_k);
    let y = s1_pow.apply(za.vertices[m - 4]);
    let xa = za.map(m + 1).apply(y);
    let xb = zb.map(m + 1).apply(y);
    let delta_star = xa.dist(xb);
    let lip = za.map(m + 1).ratio * s1_pow.ratio;
    let r_k = 5f64.sqrt() * lip;
    let delta_k = 3.64 * delta_star / r_k;
    let dxi = xi.dist(eta);
    let dtheta = (xi.theta - eta.theta).abs();

    let probe = crate::family::build::bicones_from_vertices(cfg, &za.vertices)?
        .root
        .probe(cfg.probe_points, cfg.seed);
    let shifts: Vec<f64> = (1..=2 * m).map(|i| max_shift(za.map(i), zb.map(i), &probe)).collect();
    let unchanged = (1..=2 * m)
        .filter(|&i| ![m + 1, m + 2, m + 4].contains(&i))
        .map(|i| shifts[i - 1])
        .fold(0.0, f64::max);
    let max_displacement = shifts.iter().cloned().fold(0.0, f64::max);
    let dz = za.vertices[m + 1].dist(zb.vertices[m + 1]);

    // the pivot map on the image of A under S_1^{i_k}
    let sets = sets_ab(cfg, xi)?;
    let a_img: Vec<Vec3> = probe_union(&sets.a, cfg.probe_points, cfg.seed)
        .into_iter()
        .map(|x| s1_pow.apply(x))
        .collect();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &x in &a_img {
        let d = za.map(m + 1).apply(x).dist(zb.map(m + 1).apply(x));
        lo = lo.min(d);
        hi = hi.max(d);
    }

    let sc = xi_frame(xi).to_spherical(xa);
    let lower = 0.98 * r_k / 5f64.sqrt() * 0.41f64.sqrt() * dxi;
    let upper = r_k * 1.59f64.sqrt() * dxi;
    let res = format!("{} probe points", probe.len());
    let checks = vec![
        Check::near("unchanged_maps_shift", 0.0, unchanged, 0.0).with_note(res.clone()),
        Check::below("reversed_map_shift", 0.46 * dtheta, shifts[m + 3], SLACK).with_note(res.clone()),
        Check::below("next_map_shift", dz, shifts[m + 1], SLACK).with_note(res.clone()),
        Check::below("all_maps_shift", delta_k, max_displacement, SLACK).with_note(res),
        Check::above("point_shift_lower", lower, delta_star, SLACK),
        Check::below("point_shift_upper", upper, delta_star, SLACK),
        Check::above("pivot_shift_lower", delta_star / 1.19, lo, SLACK)
            .with_note(format!("{} points of the image of A", a_img.len())),
        Check::below("pivot_shift_upper", 1.19 * delta_star, hi, SLACK),
        Check::near("point_polar", beta0(), sc.polar, 1e-6),
        Check::below("point_abs_azimuth", 0.295, sc.azimuth.abs(), 0.0),
        Check::near("point_radius", r_k, sc.radius, 1e-9 * r_k),
    ];
    Ok(DisplacementReport {
        k,
        pair: (i_k, j_k),
        delta_star,
        r_k,
        delta_k,
        xi_dist: dxi,
        max_displacement,
        point_radius: sc.radius,
        point_azimuth: sc.azimuth,
        point_polar: sc.polar,
        checks,
    })
}

/// Sampled second differences of the parametrizations of the k-th piece
/// pair, relative to the point shift `delta*_k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollageBracket {
    pub k: usize,
    pub pair: (u64, u64),
    pub delta_star: f64,
    /// Extremes of `|phi(xi,s) - phi(eta,s) - psi(xi,t) + psi(eta,t)| / delta*`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `q_{m+4} / (1 - q) * (q_{m+1} q_1^i + q_m q_{2m}^j) * delta_k / delta*`.
    pub collage_term: f64,
    /// The same with `delta_k` replaced by the measured largest map shift.
    pub collage_term_measured: f64,
    /// Extremes of the `A`-side difference alone, relative to `delta*`.
    pub a_side: (f64, f64),
    /// Largest `B`-side difference, relative to `delta*`.
    pub b_side_max: f64,
    pub samples: usize,
}

fn random_tail(rng: &mut ChaCha8Rng, n: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(1..=n)).collect()
}

/// Samples `samples` parameter pairs `(s, t)` in the two pieces of the k-th
/// pair: `s` in `S_{m+1} S_1^{i_k}(gamma_A)`, `t` in `S_m S_{2m}^{j_k}(gamma_B)`,
/// each given by a finite address shared by both parameters.
pub fn collage_bracket(
    cfg: &FamilyConfig,
    xi: ParamXi,
    eta: ParamXi,
    sigma: &SigmaSeq,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<CollageBracket> {
    let rep = displacement_report(cfg, xi, eta, sigma, k)?;
    let (i_k, j_k) = rep.pair;
    let m = cfg.m as u32;
    let za = build_zipper(cfg, xi)?;
    let zb = build_zipper(cfg, eta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prefix_a: Vec<u32> = std::iter::once(m + 1).chain(std::iter::repeat(1).take(i_k as usize)).collect();
    let prefix_b: Vec<u32> = std::iter::once(m).chain(std::iter::repeat(2 * m).take(j_k as usize)).collect();
    let point = |z: &Zipper, prefix: &[u32], first: u32, tail: &[u32], last: bool| {
        let mut d = prefix.to_vec();
        d.push(first);
        d.extend_from_slice(tail);
        eval_address(z, &d, last)
    };
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let (mut alo, mut ahi, mut bhi) = (f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let fa = m - 4 + rng.gen_range(0..3);
        let fb = m + 3 + rng.gen_range(0..3);
        let ta = random_tail(&mut rng, 2 * m, 10);
        let tb = random_tail(&mut rng, 2 * m, 10);
        let (la, lb) = (rng.gen::<bool>(), rng.gen::<bool>());
        let da = point(&za, &prefix_a, fa, &ta, la) - point(&zb, &prefix_a, fa, &ta, la);
        let db = point(&za, &prefix_b, fb, &tb, lb) - point(&zb, &prefix_b, fb, &tb, lb);
        let r = (da - db).norm() / rep.delta_star;
        lo = lo.min(r);
        hi = hi.max(r);
        let a = da.norm() / rep.delta_star;
        alo = alo.min(a);
        ahi = ahi.max(a);
        bhi = bhi.max(db.norm() / rep.delta_star);
    }
    let q = za.max_ratio().max(zb.max_ratio());
    let mu = cfg.m;
    let size = za.map(mu + 1).ratio * za.map(1).ratio.powi(i_k as i32)
        + za.map(mu).ratio * za.map(2 * mu).ratio.powi(j_k as i32);
    let factor = za.map(mu + 4).ratio / (1.0 - q) * size;
    Ok(CollageBracket {
        k,
        pair: rep.pair,
        delta_star: rep.delta_star,
        min_ratio: lo,
        max_ratio: hi,
        collage_term: factor * rep.delta_k / rep.delta_star,
        collage_term_measured: factor * rep.max_displacement / rep.delta_star,
        a_side: (alo, ahi),
        b_side_max: bhi,
        samples,
    })
}

impl CollageBracket {
    pub fn checks(&self) -> Vec<Check> {
        let note = format!("{} sampled parameter pairs", self.samples);
        vec![
            Check::above("second_difference_lower", 0.8, self.min_ratio, 0.0).with_note(note.clone()),
            Check::below("second_difference_upper", 1.22, self.max_ratio, 0.0).with_note(note),
            Check::below("collage_term", 0.03, self.collage_term, 0.0),
        ]
    }
}
