use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use zipper3d::cstar::*;
use zipper3d::family::{cone_setup, FamilyConfig, GENERATOR_RADIUS};
use zipper3d::geom::{Rotation3, Similarity3, Vec3};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `u, v` with `alpha u + beta v = 1` and `u/v` purely imaginary.
fn uv_for(alpha: f64, beta: f64) -> (Complex64, Complex64) {
    (c(1.0, 1.0) / (2.0 * alpha), c(1.0, -1.0) / (2.0 * beta))
}

#[test]
fn kronecker_rational_coefficients() {
    let (u, v) = uv_for(0.5, 1.0 / 3.0);
    let cert = kronecker_test(u, v, 10).unwrap();
    assert_eq!(cert.verdict, Verdict::Dependent);
    assert!((cert.alpha - 0.5).abs() < 1e-15 && (cert.beta - 1.0 / 3.0).abs() < 1e-15);
    let [k, l, m] = cert.witness.unwrap();
    assert!((k as f64 * cert.alpha + l as f64 * cert.beta + m as f64).abs() < 1e-12);
    // k/2 + l/3 + m = 0 has height-2 solutions, e.g. (2, 0, -1); (2, 3, -2) is
    // another relation but not of least height
    assert_eq!([k, l, m], [2, 0, -1]);
    assert!((2.0 * cert.alpha + 3.0 * cert.beta - 2.0).abs() < 1e-12);
}

#[test]
fn kronecker_irrational_coefficients() {
    let (u, v) = uv_for(2f64.sqrt(), 3f64.sqrt());
    let cert = kronecker_test(u, v, 10_000).unwrap();
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    assert!(cert.witness.is_none());
    // only the flag turns an empty search into "dense"
    assert_eq!(kronecker_test_with(u, v, 50, true).unwrap().verdict, Verdict::Dense);
    assert_eq!(kronecker_test_with(u, v, 50, false).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn kronecker_degenerate_and_integer_cases() {
    assert!(matches!(kronecker_test(c(2.0, 0.0), c(1.0, 0.0), 10), Err(zipper3d::Error::Degenerate(_))));
    assert!(kronecker_test(c(1.0, 1.0), c(2.0, 2.0), 10).is_err());
    assert!(kronecker_test(c(0.0, 1.0), c(1.0, 0.0), 0).is_err());
    // u = i, v = 1 is solvable with alpha = 0, beta = 1: a trivial relation
    let cert = kronecker_test(c(0.0, 1.0), c(1.0, 0.0), 10).unwrap();
    assert_eq!((cert.alpha, cert.beta), (0.0, 1.0));
    assert_eq!(cert.verdict, Verdict::Dependent);
    assert_eq!(cert.witness, Some([0, 1, -1]));
}

#[test]
fn kronecker_is_deterministic_under_threads() {
    let (u, v) = uv_for(0.25, 0.7);
    let a = kronecker_test(u, v, 200).unwrap();
    let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| kronecker_test(u, v, 200).unwrap());
    assert_eq!(a, b);
    let [k, l, m] = a.witness.unwrap();
    assert!((k as f64 * 0.25 + l as f64 * 0.7 + m as f64).abs() < 1e-12);
}

#[test]
fn ratio_sequence_exact_cancellation() {
    let g = GenPair::new(c(0.3, 0.0), c(0.3, 0.0)).unwrap();
    let s = ratio_sequence(&g, c(1.0, 0.0), c(1.0, 0.0), 1e-9, 100).unwrap();
    assert_eq!(s.pairs[0], (0, 0));
    assert_eq!(s.residuals[0], 0.0);
    assert!(s.converged);
    // z1 = xi^3 z2: the first record is already exact, at (0, 3)
    let s = ratio_sequence(&g, c(0.027, 0.0), c(1.0, 0.0), 1e-9, 100).unwrap();
    assert_eq!(s.pairs[0], (0, 3));
    assert!(s.residuals[0] < 1e-12);
}

#[test]
fn ratio_sequence_generic_pair() {
    let g = GenPair::from_polar(0.16, 0.01, 0.17, 0.013).unwrap();
    let one = c(1.0, 0.0);
    let s = ratio_sequence(&g, one, one, 0.05, 5000).unwrap();
    assert!(s.residuals.windows(2).all(|w| w[1] < w[0]));
    assert!(s.pairs.windows(2).all(|w| w[1].0 > w[0].0));
    assert!(s.converged);
    assert!(s.final_residual().unwrap() < 0.05);
    // the residual of each record, recomputed
    let (lr, a) = (0.16f64.ln(), 0.01);
    let (lb, b) = (0.17f64.ln(), 0.013);
    for (&(n, m), &r) in s.pairs.iter().zip(&s.residuals) {
        let log_mod = n as f64 * lr - m as f64 * lb;
        let ph = wrap_angle(n as f64 * a - m as f64 * b).abs();
        assert!((log_mod.abs() + ph - r).abs() < 1e-9, "pair ({n}, {m})");
    }
    let again = ratio_sequence(&g, one, one, 0.05, 5000).unwrap();
    assert_eq!(s, again);
    let lim = s.phase_limits.unwrap();
    assert!(lim.n_alpha >= 0.0 && lim.n_beta >= 0.0 && lim.m_beta >= 0.0);
}

#[test]
fn ratio_sequence_unreachable_phase() {
    let g = GenPair::from_polar(1.0 / 6.0, 0.0, 1.0 / 6.0, 0.0).unwrap();
    let s = ratio_sequence(&g, c(-1.0, 0.0), c(1.0, 0.0), 0.05, 2000).unwrap();
    assert!(!s.converged);
    assert!(s.residuals.iter().all(|&r| r >= PI - 1e-12));
    assert!(s.deviations.iter().all(|&d| d >= 2.0 - 1e-12));
    assert!(ratio_sequence(&g, c(0.0, 0.0), c(1.0, 0.0), 0.05, 10).is_err());
    assert!(ratio_sequence(&g, c(1.0, 0.0), c(1.0, 0.0), 0.0, 10).is_err());
}

#[test]
fn phase_coverage_single_target() {
    let g = GenPair::new(c(0.5, 0.0), c(0.25, 0.0)).unwrap();
    let cov = phase_coverage(&g, &[c(1.0, 0.0)], 1e-6, 50);
    assert_eq!(cov.hit_count(), 1);
    assert_eq!(cov.hits[0].pair, Some((2, -1)));
    assert_eq!(cov.hits[0].deviation, 0.0);
    // fewer than 16 targets is never second-type evidence
    assert_eq!(cov.verdict, Evidence::FirstType);
}

#[test]
fn phase_coverage_rational_angle() {
    let a = TAU / 5.0;
    let g = GenPair::from_polar(1.0 / 6.0, a, 1.0 / 6.0, a).unwrap();
    let targets = phase_grid(20);
    let cov = phase_coverage(&g, &targets, 1e-3, 1000);
    let hit: Vec<usize> = cov.hits.iter().enumerate().filter(|(_, h)| h.hit).map(|(j, _)| j).collect();
    assert_eq!(hit, vec![0, 4, 8, 12, 16]);
    assert_eq!(cov.verdict, Evidence::FirstType);
    let cov16 = phase_coverage(&g, &phase_grid(16), 1e-3, 1000);
    assert_eq!(cov16.verdict, Evidence::FirstType);
}

#[test]
fn phase_coverage_default_generators() {
    let g = FamilyConfig::default().generators().unwrap();
    let targets = phase_grid(16);
    let cov = phase_coverage(&g, &targets, 0.1, 100_000);
    assert_eq!(cov.verdict, Evidence::SecondType);
    assert_eq!(cov.hit_count(), 16);
    for h in &cov.hits {
        let (n, m) = h.pair.unwrap();
        // xi^n underflows; go through logarithms
        let log_mod = n as f64 * g.xi.norm().ln() + m as f64 * g.eta.norm().ln();
        let w = Complex64::from_polar(log_mod.exp(), n as f64 * g.xi.arg() + m as f64 * g.eta.arg());
        assert!((w - 1.0).norm() < 0.1, "pair ({n}, {m})");
        assert!((Complex64::from_polar(1.0, n as f64 * g.xi.arg()) - h.target).norm() < 0.1);
    }
    let again = phase_coverage(&g, &targets, 0.1, 100_000);
    assert_eq!(cov, again);
}

#[test]
fn tuning_reaches_second_type() {
    let cfg = FamilyConfig::default();
    let g = cfg.generators().unwrap();
    // the defaults close up at step 9; read the turns back from them
    let spec = TuneSpec {
        base: 1.0 / 6.0,
        radius: GENERATOR_RADIUS,
        turn_xi: 9.0 * g.xi.arg(),
        turn_eta: 9.0 * g.eta.arg(),
        log_gap: 0.0,
        detune: 1e-6,
        n_min: 1,
        n_max: 30,
        grid: 16,
        eps: 0.1,
        max_n: 20_000,
    };
    let t = tune_pair(&spec).unwrap();
    assert_eq!(t.coverage.verdict, Evidence::SecondType);
    assert!((t.pair.xi - 1.0 / 6.0).norm() <= GENERATOR_RADIUS);
    assert!((t.pair.eta - 1.0 / 6.0).norm() <= GENERATOR_RADIUS);
    assert!(t.hit <= 9);
    let mut bad = spec;
    bad.n_max = 2;
    assert!(tune_pair(&bad).is_err());
}

#[test]
fn cone_sequence_identical_maps() {
    let f = Similarity3::spiral(Vec3::new(1.0, 2.0, 0.0), Vec3::Z, 0.2, 0.3);
    let w = Vec3::new(2.0, 2.0, 0.5);
    let s = cone_sequence(&f, &f, w, w, None, 1e-9, 200).unwrap();
    assert_eq!(s.pairs[0], (0, 0));
    assert!(s.residuals[0] < 1e-12);
    assert!(s.converged);
    // on the axis
    assert!(cone_sequence(&f, &f, Vec3::new(1.0, 2.0, 3.0), w, None, 0.1, 10).is_err());
    // different fixed points
    let g = Similarity3::spiral(Vec3::ZERO, Vec3::Z, 0.2, 0.3);
    assert!(cone_sequence(&f, &g, w, w, None, 0.1, 10).is_err());
}

#[test]
fn cone_sequence_family_witness() {
    let cfg = FamilyConfig::default();
    let setup = cone_setup(&cfg, cfg.witness_xi()).unwrap();
    let best = setup
        .rays
        .iter()
        .map(|&r| cone_sequence(&setup.f1, &setup.f2, setup.w1, setup.w2, Some(r), 0.05, 10_000).unwrap())
        .min_by(|a, b| a.final_residual().partial_cmp(&b.final_residual()).unwrap())
        .unwrap();
    assert!(best.residuals.windows(2).all(|w| w[1] < w[0]));
    assert!(best.converged, "final {:?}", best.final_residual());
}

#[test]
fn cone_sequence_commensurate_angles() {
    let step = TAU / 7.0;
    let f1 = Similarity3::spiral(Vec3::ZERO, Vec3::Z, 1.0 / 6.0, 2.0 * step);
    let f2 = Similarity3::spiral(Vec3::ZERO, Vec3::Z, 1.0 / 7.0, 3.0 * step);
    let w = Vec3::X;
    // orbits stay on the seventh roots; this ray sits halfway between two
    let ray = Rotation3::about_z(step / 2.0).apply(Vec3::X);
    let s = cone_sequence(&f1, &f2, w, w, Some(ray), 0.05, 5000).unwrap();
    assert!(!s.converged);
    assert!(s.final_residual().unwrap() >= step - 1e-9);
    // toward a root the radial part alone decides, and it converges
    let s = cone_sequence(&f1, &f2, w, w, Some(Vec3::X), 0.05, 5000).unwrap();
    assert!(s.converged);
}

#[test]
fn cone_sequence_rotation_equivariance() {
    let cfg = FamilyConfig::default();
    let setup = cone_setup(&cfg, cfg.witness_xi()).unwrap();
    let ray = setup.rays[0];
    let iso = Similarity3::new(1.0, Rotation3::from_axis_angle(Vec3::new(1.0, -2.0, 0.5).normalized().unwrap(), 1.3), Vec3::new(4.0, -1.0, 2.0))
        .unwrap();
    let conj = |f: &Similarity3| iso.compose(f).compose(&iso.inverse());
    let a = cone_sequence(&setup.f1, &setup.f2, setup.w1, setup.w2, Some(ray), 0.05, 3000).unwrap();
    let b = cone_sequence(
        &conj(&setup.f1),
        &conj(&setup.f2),
        iso.apply(setup.w1),
        iso.apply(setup.w2),
        Some(iso.rot.apply(ray)),
        0.05,
        3000,
    )
    .unwrap();
    assert_eq!(a.pairs, b.pairs);
    for (x, y) in a.residuals.iter().zip(&b.residuals) {
        assert!((x - y).abs() < 1e-10);
    }
}
