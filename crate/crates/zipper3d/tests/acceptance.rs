//! Acceptance criteria. Prints one line per criterion and exits non-zero if
//! any fails.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};
use zipper3d::certify::scan_d;
use zipper3d::family::*;
use zipper3d::zipper::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f));
    let took = start.elapsed();
    let (pass, detail) = match res {
        Ok(o) => (o.pass && took <= limit, o.detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    println!(
        "[{}] {n:>2} {name}: {detail} ({:.2} s, limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn grid27(cfg: &FamilyConfig) -> Vec<ParamXi> {
    cfg.domain().grid((3, 3, 3))
}

fn similarity_dimension_bound() -> Outcome {
    let cfg = FamilyConfig::default();
    let (mut worst, mut resid) = (0.0f64, 0.0f64);
    for xi in grid27(&cfg) {
        let q = build_zipper(&cfg, xi).unwrap().ratios();
        let s = similarity_dimension(&q).unwrap();
        worst = worst.max(s);
        resid = resid.max((q.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0).abs());
    }
    outcome(worst < 1.28 && resid < 1e-12, format!("max dimension {worst:.6} < 1.28, solver residual {resid:.1e}"))
}

fn holder_exponent_bound() -> Outcome {
    let cfg = FamilyConfig::default();
    let t = cfg.linear_zipper().unwrap();
    let worst = grid27(&cfg)
        .into_iter()
        .map(|xi| holder_exponent(&build_zipper(&cfg, xi).unwrap(), &t).unwrap())
        .fold(f64::INFINITY, f64::min);
    outcome(worst > 0.75, format!("min exponent {worst:.6} > 0.75"))
}

fn reversed_map_angle() -> Outcome {
    let (b, mu) = (beta0(), MU);
    let at_tangency = alpha_m4(b).unwrap().abs();
    let h = 1e-7;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for s in 0..=40 {
        let t = b - mu + mu / 2.0 * s as f64 / 40.0;
        let d = ((alpha_m4(t + h).unwrap() - alpha_m4(t - h).unwrap()) / (2.0 * h)).abs();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    outcome(
        at_tangency < 1e-12 && lo > 14.0 && hi < 20.0,
        format!("angle at beta0 {at_tangency:.1e}; |derivative| in [{lo:.3}, {hi:.3}]"),
    )
}

fn bicone_pair_dihedrals() -> Outcome {
    let cfg = FamilyConfig::default();
    let tol = 5e-3;
    let (mut outer, mut inner_lo, mut inner_hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for xi in grid27(&cfg) {
        let pc = pair_constants(&cfg, &build_bicones(&cfg, xi).unwrap()).unwrap();
        outer = outer.max(pc.dihedral_v.unwrap());
        let d0 = pc.dihedral_v0.unwrap();
        inner_lo = inner_lo.min(d0);
        inner_hi = inner_hi.max(d0);
    }
    outcome(
        outer <= 0.545 + tol && inner_lo > 0.224 - tol && inner_hi < 0.317 + tol,
        format!("outer pair max {outer:.4} <= 0.545; inner pair in [{inner_lo:.4}, {inner_hi:.4}] within (0.224, 0.317)"),
    )
}

fn end_set_bounds() -> Outcome {
    let cfg = FamilyConfig { probe_points: 2000, ..FamilyConfig::default() };
    let s = sets_ab(&cfg, cfg.xi0()).unwrap();
    let b = s.a_bounds;
    outcome(
        (s.r - 2.214).abs() < 5e-3 && b.covering_ratio < 1.0 && b.probes >= 2000,
        format!(
            "R = {:.4}; {} probes, farthest at {:.3} of the covering radius 0.036 R",
            s.r, b.probes, b.covering_ratio
        ),
    )
}

fn sigma_structure() -> Outcome {
    let cfg = FamilyConfig { q1: 1.0 / 6.0, alpha1: 0.0, q2m: 1.0 / 6.0, alpha2m: 0.0, ..FamilyConfig::default() };
    let s = enumerate_sigma(&cfg, 200).unwrap();
    let diagonal: Vec<(u64, u64)> = (0..=200).map(|k| (k, k)).collect();
    let brute: Vec<(u64, u64)> = (0..=200u64)
        .flat_map(|i| (0..=200u64).map(move |j| (i, j)))
        .filter(|&(i, j)| (i as f64 - j as f64).abs() * 6f64.ln() < 0.1)
        .collect();
    let ok = s.pairs == diagonal && s.pairs == brute && s.invariant && s.sampled_ratios.len() == 11;
    outcome(ok, format!("{} pairs, all diagonal; invariant over {} ratios", s.len(), s.sampled_ratios.len()))
}

fn displacement_brackets() -> Outcome {
    let cfg = FamilyConfig::default();
    let d = cfg.domain();
    let sigma = enumerate_sigma(&cfg, 40).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for n in 0..50 {
        let xi = d.at([rng.gen(), rng.gen(), rng.gen()]);
        let eta = d.at([rng.gen(), rng.gen(), rng.gen()]);
        let k = rng.gen_range(1..=5);
        let r = displacement_report(&cfg, xi, eta, &sigma, k).unwrap();
        failures.extend(r.checks.iter().filter(|c| !c.pass).map(|c| format!("{}#{n}", c.item)));
        let b = collage_bracket(&cfg, xi, eta, &sigma, k, 100, n).unwrap();
        lo = lo.min(b.min_ratio);
        hi = hi.max(b.max_ratio);
    }
    let ok = failures.is_empty() && lo > 0.8 && hi < 1.22;
    outcome(
        ok,
        format!("50 triples; point, pivot and map-shift bounds failed {}; second difference in [{lo:.3}, {hi:.3}]", failures.len()),
    )
}

fn collage_bounds() -> Outcome {
    let mut checked = 0;
    for seed in 0..20u64 {
        checked += match seed % 3 {
            0 => common::check_b1(&common::synthetic(seed, 0, false), &[1]),
            1 => common::check_b1(&common::synthetic(seed, 1, false), &[2, 1]),
            _ => common::check_b2(&common::synthetic(seed, 0, true), &[1], &[2]),
        };
    }
    outcome(true, format!("20 system pairs, {checked} enumerated displacements inside their bounds"))
}

fn witness_decay() -> Outcome {
    let cfg = FamilyConfig::default();
    let scan = wsp_search(&cfg, cfg.witness_xi(), 0.05, 10_000).unwrap();
    let decreasing = scan.records.windows(2).all(|w| w[1].2 < w[0].2);
    match scan.best() {
        Some((i, j, dist)) => outcome(
            decreasing && dist < 0.05,
            format!("{} records, strictly decreasing; best {dist:.3e} at i = {i}, j = {j}", scan.records.len()),
        ),
        None => outcome(false, "no candidates"),
    }
}

fn jordan_scan() -> Outcome {
    let cfg = FamilyConfig::default();
    let s = scan_d(&cfg, (5, 5, 5), 4, 14).unwrap();
    outcome(s.positive >= 1, format!("{} of 125 grid points with every gap certified", s.positive))
}

fn parametrization_properties() -> Outcome {
    let cfg = FamilyConfig::default();
    let z = build_zipper(&cfg, cfg.witness_xi()).unwrap();
    let t = cfg.linear_zipper().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);

    let endpoints = [0usize, 3, 40].iter().all(|&depth| {
        parametrize(&z, &t, 0.0, depth).unwrap() == z.first() && parametrize(&z, &t, 1.0, depth).unwrap() == z.last()
    });

    let depth = 12;
    let diam = diameter_bound(&z);
    let tol = 2.0 * diam * z.max_ratio().powi(depth as i32);
    let mut equiv = 0.0f64;
    for _ in 0..10_000 {
        let u: f64 = rng.gen();
        let i = rng.gen_range(1..=z.m());
        let lhs = parametrize(&z, &t, t.apply(i, u), depth).unwrap();
        let rhs = z.map(i).apply(parametrize(&z, &t, u, depth).unwrap());
        equiv = equiv.max(lhs.dist(rhs));
    }

    let alpha = holder_exponent(&z, &t).unwrap();
    let c = 2.0 * diam / t.min_ratio().powf(alpha);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let a: f64 = rng.gen();
        let h = 10f64.powf(-rng.gen_range(0.0..8.0));
        let b = (a + h).min(1.0);
        if b <= a {
            continue;
        }
        let d = parametrize(&z, &t, a, 48).unwrap().dist(parametrize(&z, &t, b, 48).unwrap());
        worst = worst.max(d / (c * (b - a).powf(alpha)));
    }

    // the exponent is attained along the critical map
    let k = holder_critical_index(&z.ratios(), &t.ratios);
    let big_l = z.first().dist(z.last());
    let mut exact = 0.0f64;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..6 {
        lo = t.apply(k, lo);
        hi = t.apply(k, hi);
        let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
        let d = parametrize(&z, &t, a, 48).unwrap().dist(parametrize(&z, &t, b, 48).unwrap());
        exact = exact.max((d / (b - a).powf(alpha) / big_l - 1.0).abs());
    }

    outcome(
        endpoints && equiv <= tol && worst <= 1.0 && exact < 1e-6,
        format!(
            "endpoints exact {endpoints}; equivariance {equiv:.2e} <= {tol:.2e}; Hoelder ratio max {worst:.3} <= 1 \
             (C = {c:.1}, exponent {alpha:.4}); critical-map deviation {exact:.1e}"
        ),
    )
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "similarity dimension", s(1), similarity_dimension_bound),
        run(2, "Hoelder exponent", s(1), holder_exponent_bound),
        run(3, "reversed map angle", s(1), reversed_map_angle),
        run(4, "bicone pair dihedrals", s(5), bicone_pair_dihedrals),
        run(5, "end set bounds", s(5), end_set_bounds),
        run(6, "pair sequence structure", s(1), sigma_structure),
        run(7, "displacement brackets", s(60), displacement_brackets),
        run(8, "collage bounds", s(30), collage_bounds),
        run(9, "witness decay", s(120), witness_decay),
        run(10, "Jordan certification scan", s(600), jordan_scan),
        run(11, "parametrization properties", s(60), parametrization_properties),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
