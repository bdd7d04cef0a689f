use super::Vec3;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Spherical coordinates relative to a [`Frame`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCoord {
    pub radius: f64,
    /// In (-pi, pi], measured from the frame's azimuth reference.
    pub azimuth: f64,
    /// In [0, pi], measured from the polar axis.
    pub polar: f64,
}

/// Origin, polar axis and azimuth reference (orthogonal unit vectors).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Vec3,
    pub polar_axis: Vec3,
    pub azimuth_ref: Vec3,
}

impl Frame {
    /// Normalizes `polar_axis` and projects `azimuth_ref` onto its orthogonal
    /// complement.
    pub fn new(origin: Vec3, polar_axis: Vec3, azimuth_ref: Vec3) -> Result<Frame> {
        let p = polar_axis
            .normalized()
            .ok_or_else(|| Error::InvalidInput("zero polar axis".into()))?;
        let a = (azimuth_ref - p * azimuth_ref.dot(p))
            .normalized()
            .ok_or_else(|| Error::Degenerate("azimuth reference parallel to polar axis".into()))?;
        Ok(Frame { origin, polar_axis: p, azimuth_ref: a })
    }

    pub fn to_spherical(&self, x: Vec3) -> SphericalCoord {
        let v = x - self.origin;
        let radius = v.norm();
        let e3 = self.polar_axis.cross(self.azimuth_ref);
        let h = v.dot(self.polar_axis);
        let a = v.dot(self.azimuth_ref);
        let b = v.dot(e3);
        SphericalCoord { radius, azimuth: b.atan2(a), polar: a.hypot(b).atan2(h) }
    }

    pub fn from_spherical(&self, c: SphericalCoord) -> Vec3 {
        let e3 = self.polar_axis.cross(self.azimuth_ref);
        let (sp, cp) = c.polar.sin_cos();
        let (sa, ca) = c.azimuth.sin_cos();
        self.origin
            + (self.polar_axis * cp + (self.azimuth_ref * ca + e3 * sa) * sp) * c.radius
    }

    /// Distance from `x` to the polar axis line.
    pub fn axis_distance(&self, x: Vec3) -> f64 {
        let v = x - self.origin;
        (v - self.polar_axis * v.dot(self.polar_axis)).norm()
    }
}
