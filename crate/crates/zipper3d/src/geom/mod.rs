//! Similarity algebra in R^3, bicones and the small metric lemmas built on
//! them.

mod bicone;
mod rotation;
mod similarity;
mod spherical;
mod vec3;

pub use bicone::{
    apex_cone_margin, ball_displacement_ratio, common_generator_dihedral, meet_only_at_apex,
    separation_lower_bound, shared_apex, skew_bounds_for_angle, skew_frame_bounds, Bicone,
};
pub use rotation::Rotation3;
pub use similarity::{identity_distance, similarity_from_segment, Similarity3, ANGLE_TOL};

pub use spherical::{Frame, SphericalCoord};
pub use vec3::Vec3;

/// Compose a sequence of similarities in application order reversed:
/// `chain(&[a, b, c]) = a o b o c`.
pub fn chain(maps: &[Similarity3]) -> Similarity3 {
    maps.iter().fold(Similarity3::IDENTITY, |acc, s| acc.compose(s))
}

/// Deterministic low-discrepancy sequence (Halton, bases 2, 3, 5) in [0,1)^3.
pub fn halton3(index: u64) -> [f64; 3] {
    fn radical(mut i: u64, b: u64) -> f64 {
        let mut f = 1.0;
        let mut r = 0.0;
        let inv = 1.0 / b as f64;
        while i > 0 {
            f *= inv;
            r += f * (i % b) as f64;
            i /= b;
        }
        r
    }
    [radical(index, 2), radical(index, 3), radical(index, 5)]
}

impl Bicone {
    /// `n` deterministic points filling the solid, uniform in volume, drawn
    /// from the Halton sequence starting at `offset`, followed by the apexes.
    pub fn probe(&self, n: usize, offset: u64) -> Vec<Vec3> {
        let u = self.axis();
        let e1 = u.any_orthogonal();
        let e2 = u.cross(e1);
        let l = self.axis_length();
        let rb = self.base_radius();
        let mut out = Vec::with_capacity(n + 2);
        for k in 0..n as u64 {
            let [h1, h2, h3] = halton3(k + 1 + offset);
            // signed axial coordinate s in [-1, 1] with density (1 - |s|)^2
            let side = if h1 < 0.5 { -1.0 } else { 1.0 };
            let w = (2.0 * h1 - if side < 0.0 { 0.0 } else { 1.0 }).clamp(0.0, 1.0);
            let s = side * (1.0 - (1.0 - w).cbrt());
            let r = rb * (1.0 - s.abs()) * h2.sqrt();
            let a = std::f64::consts::TAU * h3;
            let c = self.center() + u * (0.5 * l * s);
            out.push(c + (e1 * a.cos() + e2 * a.sin()) * r);
        }
        out.push(self.apex_a);
        out.push(self.apex_b);
        out
    }
}
