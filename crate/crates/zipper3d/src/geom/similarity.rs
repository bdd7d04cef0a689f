use super::{Rotation3, Vec3};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance for unit-length and perpendicularity preconditions.
pub const ANGLE_TOL: f64 = 1e-9;

/// Orientation-preserving similarity `x -> ratio * rot(x) + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity3 {
    pub ratio: f64,
    pub rot: Rotation3,
    pub shift: Vec3,
}

impl Default for Similarity3 {
    fn default() -> Self {
        Similarity3::IDENTITY
    }
}

impl Similarity3 {
    pub const IDENTITY: Similarity3 =
        Similarity3 { ratio: 1.0, rot: Rotation3::IDENTITY, shift: Vec3::ZERO };

    pub fn new(ratio: f64, rot: Rotation3, shift: Vec3) -> Result<Similarity3> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidInput(format!("similarity ratio {ratio} must be positive")));
        }
        if !shift.is_finite() {
            return Err(Error::InvalidInput("non-finite shift".into()));
        }
        Ok(Similarity3 { ratio, rot, shift })
    }

    pub fn translation(t: Vec3) -> Similarity3 {
        Similarity3 { ratio: 1.0, rot: Rotation3::IDENTITY, shift: t }
    }

    /// Homothety with fixed point `c`.
    pub fn homothety(c: Vec3, ratio: f64) -> Similarity3 {
        Similarity3 { ratio, rot: Rotation3::IDENTITY, shift: c - c * ratio }
    }

    /// Rotation by `angle` about the line through `p` with direction `axis`.
    pub fn rotation_about_line(p: Vec3, axis: Vec3, angle: f64) -> Similarity3 {
        let rot = Rotation3::from_axis_angle(axis, angle);
        Similarity3 { ratio: 1.0, rot, shift: p - rot.apply(p) }
    }

    /// Homothety about `c` composed with a rotation about the line through `c`
    /// along `axis`; the two commute.
    pub fn spiral(c: Vec3, axis: Vec3, ratio: f64, angle: f64) -> Similarity3 {
        let rot = Rotation3::from_axis_angle(axis, angle);
        Similarity3 { ratio, rot, shift: c - rot.apply(c) * ratio }
    }

    pub fn apply(&self, x: Vec3) -> Vec3 {
        self.rot.apply(x) * self.ratio + self.shift
    }

    /// Linear part only.
    pub fn apply_vector(&self, v: Vec3) -> Vec3 {
        self.rot.apply(v) * self.ratio
    }

    /// `self o o`: apply `o` first.
    pub fn compose(&self, o: &Similarity3) -> Similarity3 {
        Similarity3 {
            ratio: self.ratio * o.ratio,
            rot: self.rot.compose(&o.rot),
            shift: self.apply(o.shift),
        }
    }

    pub fn inverse(&self) -> Similarity3 {
        let ri = self.rot.inverse();
        let r = 1.0 / self.ratio;
        Similarity3 { ratio: r, rot: ri, shift: -(ri.apply(self.shift) * r) }
    }

    /// `self^n` by repeated squaring.
    pub fn powi(&self, n: u64) -> Similarity3 {
        let mut acc = Similarity3::IDENTITY;
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// Fixed point of a contraction or expansion; `None` for ratio 1.
    pub fn fixed_point(&self) -> Option<Vec3> {
        if (self.ratio - 1.0).abs() < 1e-15 {
            return None;
        }
        // (I - rR) x = b
        let m = self.rot.to_matrix();
        let mut a = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = if i == j { 1.0 } else { 0.0 } - self.ratio * m[i][j];
            }
        }
        solve3(a, self.shift)
    }
}

/// Solves `a x = b` by Cramer's rule; `None` when singular.
pub(crate) fn solve3(a: [[f64; 3]; 3], b: Vec3) -> Option<Vec3> {
    let col = |j: usize| Vec3::new(a[0][j], a[1][j], a[2][j]);
    let (c0, c1, c2) = (col(0), col(1), col(2));
    let det = c0.dot(c1.cross(c2));
    if det.abs() < 1e-300 {
        return None;
    }
    Some(Vec3::new(
        b.dot(c1.cross(c2)) / det,
        c0.dot(b.cross(c2)) / det,
        c0.dot(c1.cross(b)) / det,
    ))
}

/// Similarity sending `p -> o`, `q -> d`, whose rotation sends the normal `n`
/// of `pq` to the normal `n2` of `od`.
pub fn similarity_from_segment(
    p: Vec3,
    q: Vec3,
    n: Vec3,
    o: Vec3,
    d: Vec3,
    n2: Vec3,
) -> Result<Similarity3> {
    let (u, lu) = (q - p, (q - p).norm());
    let (v, lv) = (d - o, (d - o).norm());
    if !(lu > 0.0) || !(lv > 0.0) {
        return Err(Error::Degenerate("segment endpoints coincide".into()));
    }
    let (u, v) = (u / lu, v / lv);
    for (name, w) in [("n", n), ("n2", n2)] {
        if (w.norm() - 1.0).abs() > ANGLE_TOL {
            return Err(Error::InvalidInput(format!("{name} is not a unit vector")));
        }
    }
    if u.dot(n).abs() > ANGLE_TOL || v.dot(n2).abs() > ANGLE_TOL {
        return Err(Error::InvalidInput("normal is not perpendicular to its segment".into()));
    }
    let rot = Rotation3::from_frames(u, n, v, n2);
    let ratio = lv / lu;
    Ok(Similarity3 { ratio, rot, shift: o - rot.apply(p) * ratio })
}

/// Largest displacement `|s(x) - x|` over the probe.
pub fn identity_distance(s: &Similarity3, probe: &[Vec3]) -> Result<f64> {
    if probe.is_empty() {
        return Err(Error::InvalidInput("empty probe set".into()));
    }
    Ok(probe.iter().map(|&x| s.apply(x).dist(x)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn compose_rotation_then_translation() {
        let r = Similarity3::new(1.0, Rotation3::about_z(PI / 2.0), Vec3::ZERO).unwrap();
        let t = Similarity3::translation(Vec3::X);
        let x = t.compose(&r).apply(Vec3::X);
        assert!((x - Vec3::new(1.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn homotheties_multiply() {
        let a = Similarity3::homothety(Vec3::ZERO, 0.5);
        let b = Similarity3::homothety(Vec3::ZERO, 1.0 / 3.0);
        let c = a.compose(&b);
        assert_eq!(c.ratio, 0.5 * (1.0 / 3.0));
        assert!((c.apply(Vec3::new(6.0, 0.0, 0.0)) - Vec3::X).norm() < 1e-15);
    }

    #[test]
    fn inverse_of_homothety() {
        let c = Vec3::new(1.0, 2.0, -1.0);
        let h = Similarity3::homothety(c, 0.25).inverse();
        assert!((h.ratio - 4.0).abs() < 1e-15);
        assert!((h.apply(c) - c).norm() < 1e-14);
    }

    #[test]
    fn segment_map_identity_and_quarter_turn() {
        let (p, q, n) = (Vec3::ZERO, Vec3::X, Vec3::Y);
        let id = similarity_from_segment(p, q, n, p, q, n).unwrap();
        assert!(identity_distance(&id, &[Vec3::Y, Vec3::Z, Vec3::X]).unwrap() < 1e-15);
        let r = similarity_from_segment(p, q, n, p, q, Vec3::Z).unwrap();
        let (axis, ang) = r.rot.axis_angle();
        assert!((ang - PI / 2.0).abs() < 1e-14);
        assert!((axis - Vec3::X).norm() < 1e-14);
        let dbl = similarity_from_segment(p, q, n, p, Vec3::new(2.0, 0.0, 0.0), n).unwrap();
        assert_eq!(dbl.ratio, 2.0);
    }

    #[test]
    fn segment_map_rejects_bad_input() {
        let z = Vec3::ZERO;
        assert!(similarity_from_segment(z, z, Vec3::Y, z, Vec3::X, Vec3::Y).is_err());
        assert!(similarity_from_segment(z, Vec3::X, Vec3::X, z, Vec3::X, Vec3::Y).is_err());
    }

    #[test]
    fn identity_distance_examples() {
        assert_eq!(identity_distance(&Similarity3::IDENTITY, &[Vec3::X]).unwrap(), 0.0);
        let t = Similarity3::translation(Vec3::new(0.1, 0.0, 0.0));
        assert!((identity_distance(&t, &[Vec3::Y, Vec3::Z]).unwrap() - 0.1).abs() < 1e-15);
        let w = 0.7;
        let r = Similarity3::rotation_about_line(Vec3::ZERO, Vec3::Z, w);
        let d = identity_distance(&r, &[Vec3::X]).unwrap();
        assert!((d - 2.0 * (w / 2.0).sin()).abs() < 1e-15);
        assert!(identity_distance(&r, &[]).is_err());
    }

    #[test]
    fn spiral_fixes_center() {
        let c = Vec3::new(-3.0, 0.8, 0.0);
        let s = Similarity3::spiral(c, Vec3::X, 1.0 / 6.0, 0.3);
        assert!((s.apply(c) - c).norm() < 1e-15);
        assert!((s.fixed_point().unwrap() - c).norm() < 1e-14);
    }
}
