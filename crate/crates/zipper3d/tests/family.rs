use zipper3d::family::*;
use zipper3d::geom::{identity_distance, Vec3};
use zipper3d::zipper::validate;

fn cfg() -> FamilyConfig {
    FamilyConfig::default()
}

/// Generators `1/6` with no rotation.
fn real_generators() -> FamilyConfig {
    FamilyConfig { q1: 1.0 / 6.0, alpha1: 0.0, q2m: 1.0 / 6.0, alpha2m: 0.0, ..cfg() }
}

#[test]
fn vertex_table() {
    let c = cfg();
    let m = c.m;
    let z = build_vertices(&c, c.xi0()).unwrap();
    assert_eq!(z.len(), 2 * m + 1);
    assert_eq!(z[0], Vec3::new(-3.0, 0.8, 0.0));
    assert_eq!(z[2 * m], Vec3::new(3.0, 0.8, 0.0));
    assert_eq!(z[m], Vec3::ZERO);
    assert!((z[m].dist(z[m - 1]) - 1.0).abs() < 1e-3);
    let xi = ParamXi::new(1.01, c.xi0().theta, 0.0);
    let z = build_vertices(&c, xi).unwrap();
    assert!(z[m + 1].dist(Vec3::xy(1.01 * xi.theta.sin(), 1.01 * xi.theta.cos())) < 1e-15);
    assert!(z.iter().all(|v| v.z == 0.0));
    // equal division between z_2 and z_{m-5}
    let step = z[3] - z[2];
    for k in 3..m - 5 {
        assert!((z[k + 1] - z[k]).dist(step) < 1e-14);
    }
}

#[test]
fn triangles_through_the_table() {
    let c = cfg();
    let m = c.m;
    let z = build_vertices(&c, c.xi0()).unwrap();
    let angle_from = |o: Vec3, p: Vec3| ((p.y - o.y) / (p.x - o.x).abs()).atan();
    // base angle beta0 at z_0 and z_{2m}
    for (o, i) in [(z[0], m - 4), (z[0], m - 3), (z[2 * m], m + 4), (z[2 * m], m + 3)] {
        assert!((angle_from(o, z[i]) - beta0()).abs() < 1e-3, "vertex {i}");
    }
    for (o, i) in [(z[0], m - 5), (z[0], m - 2), (z[2 * m], m + 2), (z[2 * m], m + 5)] {
        assert!((angle_from(o, z[i]) - c.beta1()).abs() < 1e-3, "vertex {i}");
    }
}

#[test]
fn map_ratios() {
    let c = cfg();
    let m = c.m;
    for xi in c.domain().grid((3, 3, 3)) {
        let zip = build_zipper(&c, xi).unwrap();
        for i in 1..=2 * m {
            let q = zip.vertices[i].dist(zip.vertices[i - 1]) / 6.0;
            assert!((zip.map(i).ratio - q).abs() < 1e-12, "map {i}");
        }
        assert!(validate(&zip, 1e-9).unwrap().pass);
    }
    let zip = build_zipper(&c, c.xi0()).unwrap();
    // (-0.899, 1.798) to (-1/sqrt 5, 2/sqrt 5), over 6
    assert!((zip.map(m - 1).ratio - 0.168_371).abs() < 1e-6);
    assert!((zip.map(m).ratio - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(c.signature().eps(m + 4), 1);
    assert_eq!((1..=2 * m).map(|i| c.signature().eps(i)).sum::<usize>(), 1);
}

#[test]
fn maps_leaving_the_plane() {
    let c = cfg();
    let m = c.m;
    let zip = build_zipper(&c, c.witness_xi()).unwrap();
    let p = Vec3::xy(0.3, 1.1);
    for i in 1..=2 * m {
        let moves = zip.map(i).apply(p).z.abs() > 1e-12;
        let expected = [1, m + 1, m + 4, 2 * m].contains(&i);
        assert_eq!(moves, expected, "map {i}");
    }
    // with phi = 0 and theta at the tangency end only the generators rotate
    let flat = build_zipper(&real_generators(), ParamXi::new(1.0, c.domain().theta.1 - 1e-9, 0.0)).unwrap();
    assert!(flat.map(m + 4).apply(p).z.abs() < 1e-2);
}

#[test]
fn out_of_domain_parameters() {
    let c = cfg();
    let d = c.domain();
    for xi in [
        ParamXi::new(1.03, c.xi0().theta, 0.0),
        ParamXi::new(1.0, d.theta.1, 0.0),
        ParamXi::new(1.0, c.xi0().theta, 0.02),
    ] {
        assert!(matches!(build_zipper(&c, xi), Err(zipper3d::Error::OutOfDomain(_))));
    }
    let bad = FamilyConfig { q1: 0.2, ..cfg() };
    assert!(build_zipper(&bad, c.xi0()).is_err());
    let unconstrained = FamilyConfig { constrain_generators: false, ..bad };
    assert!(build_zipper(&unconstrained, c.xi0()).is_ok());
}

#[test]
fn reversed_map_angle() {
    let b = beta0();
    let mu = MU;
    assert!(alpha_m4(b).unwrap().abs() < 1e-12);
    // high-precision evaluations of arccos(4 - 5 cos(beta0 + theta))
    assert!((alpha_m4(b - mu).unwrap() - 0.283_981_850_171_810_46).abs() < 1e-12);
    assert!((alpha_m4(b - mu / 2.0).unwrap() - 0.200_658_359_939_729_13).abs() < 1e-12);
    assert!((alpha_m4(b - 0.75 * mu).unwrap() - 0.245_845_378_639_893_49).abs() < 1e-12);
    let h = 1e-7;
    for s in 0..=20 {
        let t = b - mu + mu / 2.0 * s as f64 / 20.0;
        let d = (alpha_m4(t + h).unwrap() - alpha_m4(t - h).unwrap()) / (2.0 * h);
        assert!(d.abs() > 14.0 && d.abs() < 20.0, "derivative {d} at {t}");
    }
    assert!(matches!(alpha_m4(b + 0.01), Err(zipper3d::Error::OutOfDomain(_))));
}

#[test]
fn sigma_equal_ratios() {
    let c = real_generators();
    let s = enumerate_sigma(&c, 200).unwrap();
    let brute: Vec<(u64, u64)> = (0..=200u64)
        .flat_map(|i| (0..=200u64).map(move |j| (i, j)))
        .filter(|&(i, j)| (i as f64 * c.q1.ln() - j as f64 * c.q2m.ln()).abs() < 0.1)
        .collect();
    assert_eq!(s.pairs, brute);
    assert_eq!(s.pairs, (0..=200).map(|k| (k, k)).collect::<Vec<_>>());
    assert!(!s.pairs.contains(&(1, 2)));
    assert!(s.monotone && s.invariant);
    assert_eq!(s.sampled_ratios.len(), 11);
    assert!(s.sampled_ratios.iter().all(|&r| r > 0.98 && r < 1.02));
    assert_eq!(s.get(1), Some((0, 0)));
    assert_eq!(s.get(0), None);
}

#[test]
fn sigma_detuned_ratios() {
    let c = FamilyConfig { q1: 0.1665, q2m: 0.1669, constrain_generators: false, ..cfg() };
    let s = enumerate_sigma(&c, 200).unwrap();
    let brute: Vec<(u64, u64)> = (0..=200u64)
        .flat_map(|i| (0..=200u64).map(move |j| (i, j)))
        .filter(|&(i, j)| (i as f64 * 0.1665f64.ln() - j as f64 * 0.1669f64.ln()).abs() < 0.1)
        .collect();
    assert_eq!(s.pairs, brute);
    assert!(s.monotone);
    // i log q1 - i log q2m drifts by 0.0024 per step and leaves the band
    assert!(s.pairs.len() < 201 && s.pairs.len() > 30);
    let d = enumerate_sigma(&cfg(), 60).unwrap();
    assert!(d.monotone && d.invariant);
    let wide = FamilyConfig { q1: 0.21, constrain_generators: false, ..cfg() };
    assert!(enumerate_sigma(&wide, 10).is_err());
}

#[test]
fn transition_maps() {
    let c = cfg();
    let xi = c.witness_xi();
    let probe = [Vec3::ZERO, Vec3::xy(1.0, 1.0), Vec3::new(-1.0, 0.5, 0.7), Vec3::Z];
    let f = transition_map(&c, xi, xi).unwrap();
    assert!(identity_distance(&f, &probe).unwrap() < 1e-14);

    let eta = ParamXi::new(1.01, xi.theta, xi.phi);
    let f = transition_map(&c, xi, eta).unwrap();
    assert!((f.ratio - 1.01).abs() < 1e-12);
    assert!(f.rot.angle() < 1e-12);
    assert!(f.fixed_point().unwrap().norm() < 1e-12);

    let d = c.domain();
    let eta = d.at([0.2, 0.9, 0.15]);
    let f = transition_map(&c, xi, eta).unwrap();
    assert!((f.ratio - eta.rho / xi.rho).abs() < 1e-12);
    assert!(f.apply(Vec3::ZERO).norm() < 1e-14);
    let u = |p: ParamXi| Vec3::xy(p.theta.sin(), p.theta.cos());
    let (axis, _) = f.rot.axis_angle();
    assert!(axis.dot(u(xi) - u(eta)).abs() < 1e-12);
    assert!(f.rot.apply(u(xi)).dist(u(eta)) < 1e-12);
}

#[test]
fn displacement_bounds() {
    let c = cfg();
    let xi = c.witness_xi();
    let sigma = enumerate_sigma(&c, 20).unwrap();
    let same = displacement_report(&c, xi, xi, &sigma, 1).unwrap();
    assert_eq!(same.delta_star, 0.0);
    assert_eq!(same.max_displacement, 0.0);

    let eta = ParamXi::new(1.01, xi.theta, xi.phi);
    let r = displacement_report(&c, xi, eta, &sigma, 1).unwrap();
    assert_eq!(r.pair, (0, 0));
    let failed: Vec<_> = r.checks.iter().filter(|ch| !ch.pass).map(|ch| ch.item.clone()).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert!((r.point_polar - beta0()).abs() < 1e-6);
    assert!(r.point_azimuth.abs() < 0.295);
    assert!((r.delta_k - 3.64 * r.delta_star / r.r_k).abs() < 1e-15);
    for k in 2..=4 {
        let r = displacement_report(&c, xi, c.domain().at([0.7, 0.3, 0.6]), &sigma, k).unwrap();
        assert!(r.checks.iter().all(|ch| ch.pass), "k = {k}");
    }
    assert!(displacement_report(&c, xi, eta, &sigma, sigma.len() + 1).is_err());
}

#[test]
fn witness_ratio_bookkeeping() {
    let c = real_generators();
    let m = c.m;
    for (rho, i) in [(1.0, 3u64), (1.01, 5), (0.99, 0)] {
        let xi = ParamXi::new(rho, c.xi0().theta, 0.0);
        let zip = build_zipper(&c, xi).unwrap();
        let q = |k: usize| zip.map(k).ratio;
        let w = witness_map(&c, xi, i, i).unwrap();
        let want = q(m + 1) * q(1).powi(i as i32) * q(m - 3) / (q(m) * q(2 * m).powi(i as i32) * q(m + 4));
        assert!((w.map.ratio - want).abs() < 1e-12);
        assert!((w.map.ratio - rho).abs() < 1e-12);
        // the common point of both factors stays put
        let p = zip.map(m - 3).inverse().apply(zip.vertices[0]);
        assert!(w.map.apply(p).dist(p) < 1e-9);
    }
}

#[test]
fn witness_at_sigma_indices() {
    let c = cfg();
    let xi = c.witness_xi();
    let sigma = enumerate_sigma(&c, 40).unwrap();
    let a = wsp_witness(&c, xi, &sigma, 1).unwrap();
    let b = wsp_witness(&c, xi, &sigma, 1).unwrap();
    assert_eq!((a.i, a.j), (0, 0));
    assert!(a.dist > 0.0);
    assert_eq!(a.dist, b.dist);
    let (i, j) = sigma.get(3).unwrap();
    let w = wsp_witness(&c, xi, &sigma, 3).unwrap();
    assert_eq!((w.i, w.j), (i, j));
    assert!(wsp_witness(&c, xi, &sigma, 0).is_err());
    assert!(wsp_witness(&c, xi, &sigma, sigma.len() + 1).is_err());
}

#[test]
fn end_sets() {
    let c = cfg();
    for xi in [c.xi0(), c.witness_xi(), c.domain().at([0.1, 0.9, 0.2])] {
        let s = sets_ab(&c, xi).unwrap();
        assert!((s.r - 2.214).abs() < 5e-3, "R = {}", s.r);
        assert!(s.a_bounds.covering_ratio < 1.0);
        assert!(s.b_bounds.covering_ratio < 1.0);
        assert!(s.a_bounds.max_radius / s.a_bounds.min_radius < 1.06);
        for ch in s.a_bounds.checks("a", s.r, c.mu).into_iter().chain(s.b_bounds.checks("b", s.r, c.mu)) {
            assert!(ch.pass, "{} at {xi:?}: {}", ch.item, ch.computed);
        }
        // B mirrors A through the y-axis; the probes are not mirrored
        assert!((s.b_bounds.min_radius - s.a_bounds.min_radius).abs() < 1e-3 * s.r);
        assert!(s.a_probe(100, 0).len() >= 100 - 3);
    }
}

#[test]
fn bicone_conditions_on_the_grid() {
    let c = FamilyConfig { probe_points: 400, ..cfg() };
    for xi in c.domain().grid((5, 5, 5)) {
        let set = build_bicones(&c, xi).unwrap();
        for ch in bicone_structure(&c, &set).unwrap() {
            assert!(ch.pass, "{} at {xi:?}", ch.item);
        }
        let pc = pair_constants(&c, &set).unwrap();
        assert!(pc.v0_adjacent_margin > 0.0);
        assert!(pc.dihedral_v.unwrap() <= 0.545 + 5e-3);
        let d0 = pc.dihedral_v0.unwrap();
        assert!(d0 > 0.224 - 5e-3 && d0 < 0.317 + 5e-3);
    }
}

#[test]
fn verification_suite_groups() {
    let c = cfg();
    assert_eq!(SUITE_GROUPS.len(), 14);
    let r = verify_suite(&c, c.witness_xi(), Some(&["vertex_table", "sigma_structure"])).unwrap();
    assert!(r.pass());
    assert_eq!(r.groups.len(), 2);
    assert!(verify_suite(&c, c.witness_xi(), Some(&["nope"])).is_err());
    let json = serde_json::to_value(&r).unwrap();
    let first = &json["groups"]["vertex_table"][0];
    for key in ["claimed", "computed", "tolerance", "pass"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn config_json() {
    let c: FamilyConfig = serde_json::from_str(r#"{"m": 12}"#).unwrap();
    assert_eq!(c, cfg());
    assert!(serde_json::from_str::<FamilyConfig>(r#"{"mm": 12}"#).is_err());
    let xi: ParamXi = serde_json::from_str(r#"{"rho": 1.0, "theta": 0.45, "phi": 0.0}"#).unwrap();
    assert_eq!(xi, ParamXi::new(1.0, 0.45, 0.0));
    let g = cfg().generators().unwrap();
    assert!((g.xi - 1.0 / 6.0).norm() <= GENERATOR_RADIUS);
    assert!((g.eta - 1.0 / 6.0).norm() <= GENERATOR_RADIUS);
}
