use super::Vec3;
use serde::{Deserialize, Serialize};

/// Rotation of R^3 stored as a unit quaternion `w + xi + yj + zk`.
///
/// Every constructor and every product renormalizes, so long powers such as
/// `S_1^n` with n in the tens of thousands stay on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation3 {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Default for Rotation3 {
    fn default() -> Self {
        Rotation3::IDENTITY
    }
}

impl Rotation3 {
    pub const IDENTITY: Rotation3 = Rotation3 { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    fn normalize(w: f64, x: f64, y: f64, z: f64) -> Rotation3 {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        // canonical sign: w >= 0, so equal rotations compare equal
        let s = if w < 0.0 { -1.0 / n } else { 1.0 / n };
        Rotation3 { w: w * s, x: x * s, y: y * s, z: z * s }
    }

    /// Right-handed rotation by `angle` about `axis` (need not be unit).
    /// A zero axis gives the identity.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Rotation3 {
        match axis.normalized() {
            None => Rotation3::IDENTITY,
            Some(a) => {
                let (s, c) = (0.5 * angle).sin_cos();
                Rotation3::normalize(c, a.x * s, a.y * s, a.z * s)
            }
        }
    }

    pub fn about_x(angle: f64) -> Rotation3 {
        Rotation3::from_axis_angle(Vec3::X, angle)
    }

    pub fn about_z(angle: f64) -> Rotation3 {
        Rotation3::from_axis_angle(Vec3::Z, angle)
    }

    /// Quaternion components `[w, x, y, z]`.
    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Builds from raw components, renormalizing. `None` if all vanish.
    pub fn from_components(c: [f64; 4]) -> Option<Rotation3> {
        let n2 = c.iter().map(|v| v * v).sum::<f64>();
        if !(n2 > 0.0) || !n2.is_finite() {
            return None;
        }
        Some(Rotation3::normalize(c[0], c[1], c[2], c[3]))
    }

    /// Unit axis and angle in [0, pi]. The axis is +X for the identity.
    pub fn axis_angle(&self) -> (Vec3, f64) {
        let v = Vec3::new(self.x, self.y, self.z);
        let s = v.norm();
        if s == 0.0 {
            return (Vec3::X, 0.0);
        }
        (v / s, 2.0 * s.atan2(self.w))
    }

    pub fn angle(&self) -> f64 {
        self.axis_angle().1
    }

    pub fn inverse(&self) -> Rotation3 {
        Rotation3 { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// `self * o`: apply `o` first, then `self`.
    pub fn compose(&self, o: &Rotation3) -> Rotation3 {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        let (e, f, g, h) = (o.w, o.x, o.y, o.z);
        Rotation3::normalize(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        // v + 2w (q x v) + 2 q x (q x v)
        let q = Vec3::new(self.x, self.y, self.z);
        let t = q.cross(v) * 2.0;
        v + t * self.w + q.cross(t)
    }

    /// Row-major rotation matrix.
    pub fn to_matrix(&self) -> [[f64; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    /// From a (near) orthonormal, positively oriented matrix, row-major.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Rotation3 {
        let tr = m[0][0] + m[1][1] + m[2][2];
        if tr > 0.0 {
            let s = (tr + 1.0).sqrt() * 2.0;
            Rotation3::normalize(
                0.25 * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
            Rotation3::normalize(
                (m[2][1] - m[1][2]) / s,
                0.25 * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if m[1][1] > m[2][2] {
            let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
            Rotation3::normalize(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                0.25 * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
            Rotation3::normalize(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                0.25 * s,
            )
        }
    }

    /// Rotation taking the orthonormal frame `(a1, a2, a1 x a2)` to
    /// `(b1, b2, b1 x b2)`.
    pub fn from_frames(a1: Vec3, a2: Vec3, b1: Vec3, b2: Vec3) -> Rotation3 {
        let a3 = a1.cross(a2);
        let b3 = b1.cross(b2);
        // R = B A^T
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = b1[r] * a1[c] + b2[r] * a2[c] + b3[r] * a3[c];
            }
        }
        Rotation3::from_matrix(m)
    }

    /// Power by repeated squaring.
    pub fn powi(&self, n: u64) -> Rotation3 {
        let mut acc = Rotation3::IDENTITY;
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
}
