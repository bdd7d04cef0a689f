#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zipper3d::geom::{Similarity3, Vec3};
use zipper3d::zipper::{collage_b1, collage_b2, Address};

/// A pair of two-map systems on the x-axis: `S_1 x = r1 x`,
/// `S_2 x = 1 - r2 (1 - x)`, and `T_i` the same maps with slightly changed
/// ratios followed by a shift `e_i`.
pub struct Synthetic {
    pub s: Vec<Similarity3>,
    pub t: Vec<Similarity3>,
    pub probe: Vec<Vec3>,
}

/// `lead` gets a shift in `sign * [0.015, 0.02]`, the other map a shift in
/// `[-0.003, 0.003]` (or the opposite sign of `lead` when `opposite`).
pub fn synthetic(seed: u64, lead: usize, opposite: bool) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres = [Vec3::ZERO, Vec3::X];
    let mut s = Vec::new();
    let mut t = Vec::new();
    for i in 0..2 {
        let r: f64 = rng.gen_range(0.2..0.35);
        let r2 = r * (1.0 + rng.gen_range(-5e-4..5e-4));
        let e = if i == lead {
            rng.gen_range(0.015..0.02)
        } else if opposite {
            -rng.gen_range(0.015..0.02)
        } else {
            rng.gen_range(-0.003..0.003)
        };
        s.push(Similarity3::homothety(centres[i], r));
        t.push(Similarity3::translation(Vec3::X * e).compose(&Similarity3::homothety(centres[i], r2)));
    }
    let probe = (0..=240).map(|k| Vec3::X * (-0.1 + 1.2 * k as f64 / 240.0)).collect();
    Synthetic { s, t, probe }
}

/// Attractor point of the address `digits` followed by `1 1 1 ...`.
pub fn attractor_point(maps: &[Similarity3], digits: &[u32]) -> Vec3 {
    let fix = maps[0].fixed_point().expect("contraction");
    digits.iter().rev().fold(fix, |x, &d| maps[d as usize - 1].apply(x))
}

/// All addresses of length `n` over `{1, 2}` starting with `prefix`.
pub fn addresses(prefix: &[u32], n: usize) -> Vec<Vec<u32>> {
    let free = n - prefix.len();
    (0..1u32 << free)
        .map(|bits| {
            let mut a = prefix.to_vec();
            a.extend((0..free).map(|b| 1 + ((bits >> b) & 1)));
            a
        })
        .collect()
}

fn probe_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)))
}

/// Checks the first bound against all depth-12 addresses in the `j`
/// cylinder. Returns the number of addresses checked.
pub fn check_b1(sys: &Synthetic, j: &[u32]) -> usize {
    let ja = Address::new(j.to_vec());
    let comp = |maps: &[Similarity3]| j.iter().rev().fold(Similarity3::IDENTITY, |acc, &d| maps[d as usize - 1].compose(&acc));
    let (sj, tj) = (comp(&sys.s), comp(&sys.t));
    let (lo, hi) = probe_range(sys.probe.iter().map(|&x| tj.apply(x).dist(sj.apply(x))));
    let b = collage_b1(&sys.s, &sys.t, &sys.probe, &ja, lo * (1.0 - 1e-9), hi * (1.0 + 1e-9)).expect("non-vacuous");
    let all = addresses(j, 12);
    for a in &all {
        let d = attractor_point(&sys.t, a).dist(attractor_point(&sys.s, a));
        assert!(d >= b.lower && d <= b.upper, "{d} outside [{}, {}] at {a:?}", b.lower, b.upper);
    }
    all.len()
}

/// Checks the second bound on all pairs of depth-10 addresses in the `i`
/// and `j` cylinders. Returns the number of pairs checked.
pub fn check_b2(sys: &Synthetic, i: &[u32], j: &[u32]) -> usize {
    let comp = |maps: &[Similarity3], a: &[u32]| a.iter().rev().fold(Similarity3::IDENTITY, |acc, &d| maps[d as usize - 1].compose(&acc));
    let di: Vec<Vec3> = sys.probe.iter().map(|&x| comp(&sys.t, i).apply(x) - comp(&sys.s, i).apply(x)).collect();
    let dj: Vec<Vec3> = sys.probe.iter().map(|&x| comp(&sys.t, j).apply(x) - comp(&sys.s, j).apply(x)).collect();
    let (lo, hi) = probe_range(di.iter().flat_map(|a| dj.iter().map(move |b| (*a - *b).norm())));
    let b = collage_b2(
        &sys.s,
        &sys.t,
        &sys.probe,
        &Address::new(i.to_vec()),
        &Address::new(j.to_vec()),
        lo * (1.0 - 1e-9),
        hi * (1.0 + 1e-9),
    )
    .expect("non-vacuous");
    let shift = |a: &[u32]| attractor_point(&sys.t, a) - attractor_point(&sys.s, a);
    let si: Vec<Vec3> = addresses(i, 10).iter().map(|a| shift(a)).collect();
    let sj: Vec<Vec3> = addresses(j, 10).iter().map(|a| shift(a)).collect();
    for a in &si {
        for c in &sj {
            let d = (*a - *c).norm();
            assert!(d >= b.lower && d <= b.upper, "{d} outside [{}, {}]", b.lower, b.upper);
        }
    }
    si.len() * sj.len()
}
