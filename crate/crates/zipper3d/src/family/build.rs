use super::{beta0, FamilyConfig, ParamXi};
use crate::error::{Error, Result};
use crate::geom::{
    apex_cone_margin, common_generator_dihedral, separation_lower_bound, Bicone, Rotation3, Similarity3, Vec3,
};
use crate::report::Check;
use crate::zipper::Zipper;
use serde::{Deserialize, Serialize};

/// `z_0 .. z_{2m}` in the XY plane.
pub fn build_vertices(cfg: &FamilyConfig, xi: ParamXi) -> Result<Vec<Vec3>> {
    cfg.check()?;
    cfg.check_xi(xi)?;
    Ok(vertices_unchecked(cfg, xi))
}

pub(crate) fn vertices_unchecked(cfg: &FamilyConfig, xi: ParamXi) -> Vec<Vec3> {
    let m = cfg.m;
    let mut z = vec![Vec3::ZERO; 2 * m + 1];
    z[0] = Vec3::xy(-3.0, 0.8);
    z[1] = Vec3::xy(6.0 * cfg.q1 - 3.0, 0.8);
    z[2] = Vec3::xy(-1.0, 0.8);
    z[m - 5] = Vec3::xy(-1.0, 1.75);
    z[m - 4] = Vec3::xy(-1.0, 1.8);
    z[m - 3] = Vec3::xy(-0.92, 1.84);
    z[m - 2] = Vec3::xy(-0.899, 1.798);
    z[m - 1] = Vec3::xy(-1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt());
    z[m] = Vec3::ZERO;
    let parts = (m - 7) as f64;
    for k in 3..m - 5 {
        z[k] = z[2].lerp(z[m - 5], (k - 2) as f64 / parts);
    }
    z[m + 1] = Vec3::xy(xi.rho * xi.theta.sin(), xi.rho * xi.theta.cos());
    for i in m + 2..=2 * m {
        let p = z[2 * m - i];
        z[i] = Vec3::xy(-p.x, p.y);
    }
    z[2 * m - 1] = Vec3::xy(3.0 - 6.0 * cfg.q2m, 0.8);
    z
}

/// `arccos(4 - 5 cos(beta0 + theta))`.
pub fn alpha_m4(theta: f64) -> Result<f64> {
    let b = beta0();
    // 1 - (4 - 5 cos(b + theta)), using cos(2b) = 3/5; avoids cancellation
    // near theta = b
    let d = -10.0 * ((3.0 * b + theta) / 2.0).sin() * ((theta - b) / 2.0).sin();
    if !(0.0..=2.0).contains(&d) {
        return Err(Error::OutOfDomain(format!(
            "arccos argument {} outside [-1, 1] at theta = {theta}",
            1.0 - d
        )));
    }
    Ok(2.0 * (d / 2.0).sqrt().asin())
}

/// The zipper `S_xi`: each `S_i` is the plane similarity sending `z_0, z_{2m}`
/// to `z_{i-1}, z_i` (reversed for `i = m+4`) after a rotation about the real
/// axis by `alpha_i`.
pub fn build_zipper(cfg: &FamilyConfig, xi: ParamXi) -> Result<Zipper> {
    let z = build_vertices(cfg, xi)?;
    let m = cfg.m;
    let sig = cfg.signature();
    let a4 = alpha_m4(xi.theta)?;
    let maps = (1..=2 * m)
        .map(|i| {
            let e = sig.eps(i);
            let (za, zb) = (z[i - 1 + e], z[i - e]);
            let d = zb - za;
            let alpha = match i {
                1 => cfg.alpha1,
                i if i == 2 * m => -cfg.alpha2m,
                i if i == m + 1 => xi.phi,
                i if i == m + 4 => a4,
                _ => 0.0,
            };
            let rot = Rotation3::about_z(d.y.atan2(d.x)).compose(&Rotation3::about_x(alpha));
            let ratio = d.norm() / 6.0;
            Similarity3::new(ratio, rot, za - rot.apply(z[0]) * ratio)
        })
        .collect::<Result<Vec<_>>>()?;
    Zipper::new(maps, z, sig)
}

/// Bicones on the segments `z_{i-1} z_i` and on `z_0 z_{2m}`, with half-angles
/// `beta2` (plain), `beta0` (superscript 0) and `beta1` (superscript 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiconeSet {
    pub v: Vec<Bicone>,
    pub v0: Vec<Bicone>,
    pub v1: Vec<Bicone>,
    pub root: Bicone,
    pub root0: Bicone,
    pub root1: Bicone,
}

impl BiconeSet {
    /// `V_i`, 1-based.
    pub fn v(&self, i: usize) -> &Bicone {
        &self.v[i - 1]
    }

    pub fn v0(&self, i: usize) -> &Bicone {
        &self.v0[i - 1]
    }

    pub fn v1(&self, i: usize) -> &Bicone {
        &self.v1[i - 1]
    }
}

pub fn build_bicones(cfg: &FamilyConfig, xi: ParamXi) -> Result<BiconeSet> {
    let z = build_vertices(cfg, xi)?;
    bicones_from_vertices(cfg, &z)
}

pub(crate) fn bicones_from_vertices(cfg: &FamilyConfig, z: &[Vec3]) -> Result<BiconeSet> {
    let (b0, b1, b2) = (beta0(), cfg.beta1(), cfg.beta2());
    let each = |beta: f64| {
        (1..z.len())
            .map(|i| Bicone::new(z[i - 1], z[i], beta))
            .collect::<Result<Vec<_>>>()
    };
    let n = z.len() - 1;
    Ok(BiconeSet {
        v: each(b2)?,
        v0: each(b0)?,
        v1: each(b1)?,
        root: Bicone::new(z[0], z[n], b2)?,
        root0: Bicone::new(z[0], z[n], b0)?,
        root1: Bicone::new(z[0], z[n], b1)?,
    })
}

/// Points on the base circle of `b`.
fn rim(b: &Bicone, n: usize) -> Vec<Vec3> {
    let u = b.axis();
    let e1 = u.any_orthogonal();
    let e2 = u.cross(e1);
    let r = b.base_radius();
    (0..n)
        .map(|j| {
            let a = std::f64::consts::TAU * j as f64 / n as f64;
            b.center() + (e1 * a.cos() + e2 * a.sin()) * r
        })
        .collect()
}

/// Sampled checks that every `V_i` lies in `V`, that non-adjacent `V_i` are
/// disjoint, and that adjacent ones meet only at their common vertex (except
/// the pair at `z_m`).
pub fn bicone_structure(cfg: &FamilyConfig, set: &BiconeSet) -> Result<Vec<Check>> {
    let m = cfg.m;
    let n = 2 * m;
    // a bicone is the convex hull of its apexes and base circle
    let excess = set
        .v
        .iter()
        .flat_map(|b| {
            let mut pts = rim(b, 720);
            pts.push(b.apex_a);
            pts.push(b.apex_b);
            pts
        })
        .map(|x| set.root.excess(x))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut sep = f64::INFINITY;
    for i in 1..=n {
        for j in i + 2..=n {
            sep = sep.min(separation_lower_bound(set.v(i), set.v(j)));
        }
    }
    let mut margin = f64::INFINITY;
    for i in 2..=n {
        if i != m + 1 {
            margin = margin.min(apex_cone_margin(set.v(i - 1), set.v(i))?);
        }
    }
    Ok(vec![
        Check::below("pieces_inside_root_excess", 0.0, excess, 1e-12)
            .with_note("base circles sampled at 720 points"),
        Check::above("nonadjacent_separation", 0.0, sep, 0.0).with_note("support-function lower bound"),
        Check::above("adjacent_apex_margin", 0.0, margin, 0.0)
            .with_note("angle between axes minus sum of half-angles at the shared vertex"),
    ])
}

/// Angular data of the bicone pairs around `z_m`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairConstants {
    /// Smallest apex margin of adjacent `V0` pairs away from `z_m`.
    pub v0_adjacent_margin: f64,
    /// Apex margins of `(V_m, V1_{m+1})` and `(V1_m, V_{m+1})`.
    pub mixed_margins: (f64, f64),
    /// Dihedral between the common generators of `V_m`, `V_{m+1}`.
    pub dihedral_v: Option<f64>,
    /// The same for `V0_m`, `V0_{m+1}`.
    pub dihedral_v0: Option<f64>,
}

pub fn pair_constants(cfg: &FamilyConfig, set: &BiconeSet) -> Result<PairConstants> {
    let m = cfg.m;
    let mut margin = f64::INFINITY;
    for i in 2..=2 * m {
        if i != m + 1 {
            margin = margin.min(apex_cone_margin(set.v0(i - 1), set.v0(i))?);
        }
    }
    Ok(PairConstants {
        v0_adjacent_margin: margin,
        mixed_margins: (
            apex_cone_margin(set.v(m), set.v1(m + 1))?,
            apex_cone_margin(set.v1(m), set.v(m + 1))?,
        ),
        dihedral_v: common_generator_dihedral(set.v(m), set.v(m + 1))?,
        dihedral_v0: common_generator_dihedral(set.v0(m), set.v0(m + 1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_m4_vanishes_at_tangency() {
        assert!(alpha_m4(beta0()).unwrap().abs() < 1e-12);
        assert!(alpha_m4(1.0).is_err());
    }

    #[test]
    fn vertices_mirror() {
        let cfg = FamilyConfig::default();
        let z = build_vertices(&cfg, cfg.xi0()).unwrap();
        let m = cfg.m;
        for i in 0..=2 * m {
            if [1, m - 1, m + 1, 2 * m - 1].contains(&i) {
                continue;
            }
            let p = z[2 * m - i];
            assert_eq!(z[i], Vec3::xy(-p.x, p.y), "index {i}");
        }
    }
}
