use super::build::bicones_from_vertices;
use super::{beta0, build_vertices, FamilyConfig, ParamXi};
use crate::error::Result;
use crate::geom::{Bicone, Frame, SphericalCoord, Vec3};
use crate::report::Check;
use serde::{Deserialize, Serialize};

/// Extremes of a probe set in spherical coordinates about an end vertex
/// (polar axis along the real axis toward the curve, azimuth from `+Y`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SetBounds {
    pub min_radius: f64,
    pub max_radius: f64,
    pub max_abs_azimuth: f64,
    pub min_polar: f64,
    pub max_polar: f64,
    /// Max over min of the distance to the real axis.
    pub axis_distance_ratio: f64,
    /// Largest distance from the covering-ball centre, in units of the
    /// nominal radius `0.036 R`.
    pub covering_ratio: f64,
    pub probes: usize,
}

/// `A = V_{m-4} u V_{m-3} u V_{m-2}` and `B = V_{m+3} u V_{m+4} u V_{m+5}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetsAB {
    pub a: [Bicone; 3],
    pub b: [Bicone; 3],
    pub a_bounds: SetBounds,
    pub b_bounds: SetBounds,
    /// `R` measured on A.
    pub r: f64,
}

impl SetsAB {
    pub fn a_probe(&self, n: usize, seed: u64) -> Vec<Vec3> {
        probe_union(&self.a, n, seed)
    }

    pub fn b_probe(&self, n: usize, seed: u64) -> Vec<Vec3> {
        probe_union(&self.b, n, seed)
    }
}

/// About `n` points spread over three bicones in proportion to their volume.
pub(crate) fn probe_union(parts: &[Bicone; 3], n: usize, seed: u64) -> Vec<Vec3> {
    let vol: Vec<f64> = parts.iter().map(|b| b.axis_length() * b.base_radius().powi(2)).collect();
    let total: f64 = vol.iter().sum();
    let mut out = Vec::with_capacity(n + 6);
    for (b, v) in parts.iter().zip(&vol) {
        let k = ((n as f64) * v / total).round().max(1.0) as usize;
        out.extend(b.probe(k, seed));
    }
    out
}

fn end_frame(origin: Vec3, toward: Vec3) -> Frame {
    Frame::new(origin, toward - origin, Vec3::Y).expect("real axis is horizontal")
}

fn bounds(probe: &[Vec3], frame: &Frame, r_ref: f64, beta0: f64, mu: f64) -> SetBounds {
    let centre = frame.from_spherical(SphericalCoord { radius: 1.03 * r_ref, azimuth: 0.0, polar: beta0 - mu / 2.0 });
    let mut b = SetBounds {
        min_radius: f64::INFINITY,
        max_radius: 0.0,
        max_abs_azimuth: 0.0,
        min_polar: f64::INFINITY,
        max_polar: 0.0,
        axis_distance_ratio: 0.0,
        covering_ratio: 0.0,
        probes: probe.len(),
    };
    let (mut dmin, mut dmax) = (f64::INFINITY, 0.0f64);
    for &x in probe {
        let s = frame.to_spherical(x);
        b.min_radius = b.min_radius.min(s.radius);
        b.max_radius = b.max_radius.max(s.radius);
        b.max_abs_azimuth = b.max_abs_azimuth.max(s.azimuth.abs());
        b.min_polar = b.min_polar.min(s.polar);
        b.max_polar = b.max_polar.max(s.polar);
        let d = frame.axis_distance(x);
        dmin = dmin.min(d);
        dmax = dmax.max(d);
        b.covering_ratio = b.covering_ratio.max(x.dist(centre) / (0.036 * r_ref));
    }
    b.axis_distance_ratio = dmax / dmin;
    b
}

pub fn sets_ab(cfg: &FamilyConfig, xi: ParamXi) -> Result<SetsAB> {
    let z = build_vertices(cfg, xi)?;
    let set = bicones_from_vertices(cfg, &z)?;
    let m = cfg.m;
    let a = [*set.v(m - 4), *set.v(m - 3), *set.v(m - 2)];
    let b = [*set.v(m + 3), *set.v(m + 4), *set.v(m + 5)];
    let n = cfg.probe_points;
    let pa = probe_union(&a, n, cfg.seed);
    let pb = probe_union(&b, n, cfg.seed);
    let fa = end_frame(z[0], z[2 * m]);
    let fb = end_frame(z[2 * m], z[0]);
    let r = pa.iter().map(|x| x.dist(z[0])).fold(f64::INFINITY, f64::min);
    let rb = pb.iter().map(|x| x.dist(z[2 * m])).fold(f64::INFINITY, f64::min);
    Ok(SetsAB {
        a,
        b,
        a_bounds: bounds(&pa, &fa, r, beta0(), cfg.mu),
        b_bounds: bounds(&pb, &fb, rb, beta0(), cfg.mu),
        r,
    })
}

impl SetBounds {
    /// The stated bounds as checks, `prefix` naming the set.
    pub fn checks(&self, prefix: &str, r: f64, mu: f64) -> Vec<Check> {
        let b = beta0();
        let az = 5f64.sqrt() * mu;
        let res = format!("{} probe points", self.probes);
        vec![
            Check::above(format!("{prefix}_min_radius"), r, self.min_radius, 1e-12),
            Check::below(format!("{prefix}_max_radius"), 1.06 * r, self.max_radius, 0.0),
            Check::below(format!("{prefix}_radius_ratio"), 1.06, self.max_radius / self.min_radius, 0.0),
            Check::below(format!("{prefix}_abs_azimuth"), az, self.max_abs_azimuth, 1e-4).with_note(res.clone()),
            Check::above(format!("{prefix}_min_polar"), b - 2.0 * mu, self.min_polar, 1e-3)
                .with_note("table coordinates carry 3 decimals"),
            Check::below(format!("{prefix}_max_polar"), b + mu, self.max_polar, 1e-3),
            Check::below(format!("{prefix}_axis_distance_ratio"), 1.095, self.axis_distance_ratio, 1e-3)
                .with_note("distance to the real axis; the projection is not defined in the source"),
            Check::below(format!("{prefix}_covering_ball"), 1.0, self.covering_ratio, 0.0).with_note(res),
        ]
    }
}
