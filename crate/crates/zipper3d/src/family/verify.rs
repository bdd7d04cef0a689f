use super::build::{bicones_from_vertices, pair_constants};
use super::{
    alpha_m4, beta0, bicone_structure, build_zipper, collage_bracket, displacement_report, enumerate_sigma, sets_ab,
    wsp_search, FamilyConfig, ParamXi,
};
use crate::error::{invalid, Result};
use crate::geom::Vec3;
use crate::report::{Check, Report};
use crate::zipper::{holder_exponent, similarity_dimension, validate};
use rayon::prelude::*;

/// Names accepted by [`verify_suite`], in report order.
pub const SUITE_GROUPS: &[&str] = &[
    "vertex_table",
    "zipper_validation",
    "similarity_dimension",
    "holder_exponent",
    "rotation_angle_m4",
    "bicone_structure",
    "bicone_pairs",
    "set_a_bounds",
    "set_b_bounds",
    "sigma_structure",
    "azimuth_bound",
    "displacement",
    "second_difference",
    "wsp_witness",
];

const SIGMA_KMAX: u64 = 60;
const WITNESS_EPS: f64 = 1e-3;
const WITNESS_MAXN: u64 = 2000;

/// Runs the named groups (all of [`SUITE_GROUPS`] when `groups` is `None`) in
/// parallel. An empty list gives an empty report.
pub fn verify_suite(cfg: &FamilyConfig, xi: ParamXi, groups: Option<&[&str]>) -> Result<Report> {
    cfg.check()?;
    cfg.check_xi(xi)?;
    let names: Vec<&str> = groups.map(|g| g.to_vec()).unwrap_or_else(|| SUITE_GROUPS.to_vec());
    for g in &names {
        if !SUITE_GROUPS.contains(g) {
            return invalid(format!("unknown check group '{g}'"));
        }
    }
    let parts = names
        .par_iter()
        .map(|&g| run_group(cfg, xi, g).map(|c| (g, c)))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::default();
    for (g, checks) in parts {
        report.extend(g, checks);
    }
    Ok(report)
}

/// A second parameter inside `D`, offset from `xi` toward the centre.
pub(crate) fn companion(cfg: &FamilyConfig, xi: ParamXi) -> ParamXi {
    let d = cfg.domain();
    let step = |v: f64, (lo, hi): (f64, f64), h: f64| if v < (lo + hi) / 2.0 { v + h } else { v - h };
    ParamXi::new(
        step(xi.rho, d.rho, 0.005),
        step(xi.theta, d.theta, 0.1 * cfg.mu),
        step(xi.phi, d.phi, 0.2 * cfg.mu),
    )
}

fn run_group(cfg: &FamilyConfig, xi: ParamXi, g: &str) -> Result<Vec<Check>> {
    let m = cfg.m;
    let b = beta0();
    match g {
        "vertex_table" => {
            let z = build_zipper(cfg, xi)?;
            let v = &z.vertices;
            let ratio_err = (1..=2 * m)
                .map(|i| (z.map(i).ratio - v[i].dist(v[i - 1]) / 6.0).abs())
                .fold(0.0, f64::max);
            let mirror = (0..=2 * m)
                .filter(|i| ![1, m - 1, m + 1, 2 * m - 1].contains(i))
                .map(|i| v[i].dist(Vec3::xy(-v[2 * m - i].x, v[2 * m - i].y)))
                .fold(0.0, f64::max);
            // angle at the base vertex between the base and the vertex
            let base_angle = |from: Vec3, p: Vec3| ((p.y - from.y) / (p.x - from.x).abs()).atan();
            let (l, r) = (v[0], v[2 * m]);
            let on_b0 = [base_angle(l, v[m - 4]), base_angle(l, v[m - 3]), base_angle(r, v[m + 4]), base_angle(r, v[m + 3])]
                .iter()
                .map(|a| (a - b).abs())
                .fold(0.0, f64::max);
            let b1 = cfg.beta1();
            let on_b1 = [base_angle(l, v[m - 5]), base_angle(l, v[m - 2]), base_angle(r, v[m + 2]), base_angle(r, v[m + 5])]
                .iter()
                .map(|a| (a - b1).abs())
                .fold(0.0, f64::max);
            let toward_centre = [m - 3, m - 2, m - 1]
                .iter()
                .map(|&i| ((v[i].x.abs() / v[i].y).atan() - b).abs())
                .fold(0.0, f64::max);
            Ok(vec![
                Check::near("first_vertex", 0.0, v[0].dist(Vec3::xy(-3.0, 0.8)), 0.0),
                Check::near("last_vertex", 0.0, v[2 * m].dist(Vec3::xy(3.0, 0.8)), 0.0),
                Check::near("central_vertex_at_origin", 0.0, v[m].norm(), 0.0),
                Check::near("unit_segment_before_centre", 1.0, v[m].dist(v[m - 1]), 1e-3),
                Check::near("central_ratio", 1.0 / 6.0, z.map(m).ratio, 1e-15),
                Check::near("ratio_before_unit_segment", 0.168, z.map(m - 1).ratio, 1e-3),
                Check::below("ratio_consistency", 1e-12, ratio_err, 0.0),
                Check::below("mirror_symmetry", 1e-12, mirror, 0.0),
                Check::near("base_angle_side_vertices", 0.0, on_b0, 1e-3).with_note("largest deviation from beta0"),
                Check::near("lower_side_vertices", 0.0, on_b1, 1e-3).with_note("largest deviation from beta1"),
                Check::near("collinear_with_centre", 0.0, toward_centre, 1e-3)
                    .with_note("angle of z_{m-3}, z_{m-2}, z_{m-1} from the y axis against beta0"),
            ])
        }
        "zipper_validation" => {
            let z = build_zipper(cfg, xi)?;
            let r = validate(&z, 1e-9)?;
            Ok(vec![Check::below("vertex_residual", 1e-9, r.max_residual, 0.0)])
        }
        "similarity_dimension" => {
            let z = build_zipper(cfg, xi)?;
            let s = similarity_dimension(&z.ratios())?;
            Ok(vec![Check::below("dimension", 1.28, s, 0.0)])
        }
        "holder_exponent" => {
            let z = build_zipper(cfg, xi)?;
            let t = cfg.linear_zipper()?;
            Ok(vec![Check::above("shared_linear_zipper", 0.75, holder_exponent(&z, &t)?, 0.0)])
        }
        "rotation_angle_m4" => {
            let d = cfg.domain();
            let n = 41;
            let h = 1e-7;
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for s in 0..n {
                let t = d.theta.0 + (d.theta.1 - d.theta.0) * s as f64 / (n - 1) as f64;
                let der = ((alpha_m4(t + h)? - alpha_m4(t - h)?) / (2.0 * h)).abs();
                lo = lo.min(der);
                hi = hi.max(der);
            }
            let res = format!("{n} points, central differences");
            Ok(vec![
                Check::near("zero_at_tangency", 0.0, alpha_m4(b)?, 1e-12),
                Check::above("derivative_lower", 14.0, lo, 0.0).with_note(format!(
                    "{res}; the derivative of cos(alpha) is 5 sin(beta0 + theta), about 4, so the range applies to alpha itself"
                )),
                Check::below("derivative_upper", 20.0, hi, 0.0).with_note(res),
            ])
        }
        "bicone_structure" => {
            let z = build_zipper(cfg, xi)?;
            bicone_structure(cfg, &bicones_from_vertices(cfg, &z.vertices)?)
        }
        "bicone_pairs" => {
            let z = build_zipper(cfg, xi)?;
            let pc = pair_constants(cfg, &bicones_from_vertices(cfg, &z.vertices)?)?;
            let nan = f64::NAN;
            let dv0 = pc.dihedral_v0.unwrap_or(nan);
            Ok(vec![
                Check::above("inner_adjacent_apex_margin", 0.0, pc.v0_adjacent_margin, 0.0),
                Check::above("mixed_apex_margin", 0.0, pc.mixed_margins.0.min(pc.mixed_margins.1), 0.0),
                Check::below("outer_pair_dihedral", 0.545, pc.dihedral_v.unwrap_or(nan), 0.0),
                Check::above("inner_pair_dihedral_lower", 0.224, dv0, 0.0),
                Check::below("inner_pair_dihedral_upper", 0.317, dv0, 0.0),
            ])
        }
        "set_a_bounds" | "set_b_bounds" => {
            let s = sets_ab(cfg, xi)?;
            if g == "set_a_bounds" {
                let mut c = vec![Check::near("distance_to_set", 2.214, s.r, 5e-3)];
                c.extend(s.a_bounds.checks("a", s.r, cfg.mu));
                Ok(c)
            } else {
                Ok(s.b_bounds.checks("b", s.r, cfg.mu))
            }
        }
        "sigma_structure" => {
            let sg = enumerate_sigma(cfg, SIGMA_KMAX)?;
            Ok(vec![
                Check::holds("both_projections_increasing", sg.monotone)
                    .with_note(format!("{} pairs up to {SIGMA_KMAX}", sg.len())),
                Check::holds("stable_under_pivot_ratio", sg.invariant)
                    .with_note(format!("{} sampled ratios in (0.98, 1.02)", sg.sampled_ratios.len())),
            ])
        }
        "azimuth_bound" => {
            let ac = ((b - cfg.mu / 2.0).tan() / (b + cfg.mu).tan()).acos() + 5f64.sqrt() * cfg.mu;
            Ok(vec![
                Check::near("critical_azimuth", 0.295, ac, 5e-4),
                Check::below("sine_of_critical_azimuth", 0.295, ac.sin(), 0.0),
            ])
        }
        "displacement" => {
            let sg = enumerate_sigma(cfg, SIGMA_KMAX)?;
            let eta = companion(cfg, xi);
            let mut out = Vec::new();
            for k in 1..=3.min(sg.len()) {
                let r = displacement_report(cfg, xi, eta, &sg, k)?;
                out.extend(r.checks.into_iter().map(|c| rename(c, k)));
            }
            Ok(out)
        }
        "second_difference" => {
            let sg = enumerate_sigma(cfg, SIGMA_KMAX)?;
            let eta = companion(cfg, xi);
            let mut out = Vec::new();
            for k in 2..=3.min(sg.len()) {
                let r = collage_bracket(cfg, xi, eta, &sg, k, 200, cfg.seed)?;
                out.extend(r.checks().into_iter().map(|c| rename(c, k)));
            }
            Ok(out)
        }
        "wsp_witness" => {
            let scan = wsp_search(cfg, xi, WITNESS_EPS, WITNESS_MAXN)?;
            let decreasing = scan.records.windows(2).all(|w| w[1].2 < w[0].2);
            let best = scan.best().map_or(f64::NAN, |r| r.2);
            let note = match scan.best() {
                Some((i, j, _)) => format!("{} candidates, best at i = {i}, j = {j}", scan.candidates.len()),
                None => "no candidates".into(),
            };
            Ok(vec![
                Check::holds("records_decreasing", decreasing && !scan.records.is_empty())
                    .with_note(format!("{} records", scan.records.len())),
                Check::below("best_identity_distance", 0.05, best, 0.0).with_note(note),
            ])
        }
        _ => invalid(format!("unknown check group '{g}'")),
    }
}

fn rename(mut c: Check, k: usize) -> Check {
    c.item = format!("{}_k{k}", c.item);
    c
}
