use super::Vec3;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Two right circular cones glued along the disk through the axis midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bicone {
    pub apex_a: Vec3,
    pub apex_b: Vec3,
    pub half_angle: f64,
}

impl Bicone {
    pub fn new(apex_a: Vec3, apex_b: Vec3, half_angle: f64) -> Result<Bicone> {
        if !(apex_a.dist(apex_b) > 0.0) {
            return Err(Error::Degenerate("bicone apexes coincide".into()));
        }
        if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
            return Err(Error::InvalidInput(format!("half angle {half_angle} outside (0, pi/2)")));
        }
        Ok(Bicone { apex_a, apex_b, half_angle })
    }

    pub fn axis_length(&self) -> f64 {
        self.apex_a.dist(self.apex_b)
    }

    pub fn center(&self) -> Vec3 {
        self.apex_a.lerp(self.apex_b, 0.5)
    }

    /// Radius of the common base disk.
    pub fn base_radius(&self) -> f64 {
        0.5 * self.axis_length() * self.half_angle.tan()
    }

    /// Unit axis from `apex_a` to `apex_b`.
    pub fn axis(&self) -> Vec3 {
        (self.apex_b - self.apex_a) / self.axis_length()
    }

    /// Closed membership test.
    pub fn contains(&self, x: Vec3) -> bool {
        self.excess(x) <= 1e-12 * self.axis_length()
    }

    /// Signed amount by which `x` lies outside, measured as radial distance
    /// beyond the cone wall (negative inside). Off the axis span it is the
    /// distance beyond the nearer apex plane.
    pub fn excess(&self, x: Vec3) -> f64 {
        let l = self.axis_length();
        let u = self.axis();
        let v = x - self.apex_a;
        let t = v.dot(u);
        let r = (v - u * t).norm();
        if t < 0.0 {
            return v.norm();
        }
        if t > l {
            return (x - self.apex_b).norm();
        }
        r - t.min(l - t) * self.half_angle.tan()
    }

    /// Support function `max { u.x : x in bicone }`.
    pub fn support(&self, u: Vec3) -> f64 {
        let ax = self.axis();
        let perp = (u - ax * u.dot(ax)).norm();
        let rim = u.dot(self.center()) + self.base_radius() * perp;
        u.dot(self.apex_a).max(u.dot(self.apex_b)).max(rim)
    }

    /// Same bicone with another half-angle.
    pub fn with_half_angle(&self, half_angle: f64) -> Result<Bicone> {
        Bicone::new(self.apex_a, self.apex_b, half_angle)
    }

    /// Unit direction of the axis seen from `apex` toward the other apex,
    /// if `apex` is one of the two apexes.
    fn axis_from(&self, apex: Vec3) -> Option<Vec3> {
        let tol = 1e-12 * (1.0 + self.axis_length());
        if apex.dist(self.apex_a) <= tol {
            Some(self.axis())
        } else if apex.dist(self.apex_b) <= tol {
            Some(-self.axis())
        } else {
            None
        }
    }

    /// Surface points: `2 n_ring - 1` rings of `n_around` points, evenly
    /// spaced along the axis and including the base circle, plus the apexes.
    pub fn sample(&self, n_ring: usize, n_around: usize) -> Vec<Vec3> {
        let u = self.axis();
        let e1 = u.any_orthogonal();
        let e2 = u.cross(e1);
        let l = self.axis_length();
        let tan = self.half_angle.tan();
        let mut out = vec![self.apex_a, self.apex_b];
        for i in 1..(2 * n_ring) {
            let t = l * i as f64 / (2 * n_ring) as f64;
            let r = t.min(l - t) * tan;
            for j in 0..n_around {
                let a = std::f64::consts::TAU * j as f64 / n_around as f64;
                out.push(self.apex_a + u * t + (e1 * a.cos() + e2 * a.sin()) * r);
            }
        }
        out
    }
}

/// Shared apex of two bicones, if any.
pub fn shared_apex(b1: &Bicone, b2: &Bicone) -> Option<Vec3> {
    [b1.apex_a, b1.apex_b].into_iter().find(|&p| b2.axis_from(p).is_some())
}

/// Axes of the two cones emanating from the shared apex.
fn cones_at_apex(b1: &Bicone, b2: &Bicone) -> Result<(Vec3, Vec3, Vec3)> {
    let p = shared_apex(b1, b2)
        .ok_or_else(|| Error::InvalidInput("bicones share no apex".into()))?;
    let e1 = b1.axis_from(p).expect("apex of b1");
    let e2 = b2.axis_from(p).expect("apex of b2");
    Ok((p, e1, e2))
}

/// Whether two bicones sharing an apex meet only at that apex.
///
/// Each bicone lies in the infinite cone from either apex, so the test is
/// exact: the cones at the shared apex are disjoint off the apex iff the
/// angle between their axes exceeds the sum of half-angles.
pub fn meet_only_at_apex(b1: &Bicone, b2: &Bicone) -> Result<bool> {
    let (_, e1, e2) = cones_at_apex(b1, b2)?;
    Ok(e1.angle(e2) > b1.half_angle + b2.half_angle)
}

/// Margin `angle(axes) - (beta1 + beta2)` at the shared apex.
pub fn apex_cone_margin(b1: &Bicone, b2: &Bicone) -> Result<f64> {
    let (_, e1, e2) = cones_at_apex(b1, b2)?;
    Ok(e1.angle(e2) - b1.half_angle - b2.half_angle)
}

/// Dihedral angle, with edge on the axis of `b2`, between the half-planes
/// through the two common generators of the cones at the shared apex.
/// `None` when the lateral surfaces meet only at the apex.
pub fn common_generator_dihedral(b1: &Bicone, b2: &Bicone) -> Result<Option<f64>> {
    let (_, e1, e2) = cones_at_apex(b1, b2)?;
    let d = e1.angle(e2);
    let (g1, g2) = (b1.half_angle, b2.half_angle);
    if d < 1e-12 && (g1 - g2).abs() < 1e-12 {
        return Err(Error::Degenerate("cone surfaces coincide".into()));
    }
    if d >= g1 + g2 || d <= (g1 - g2).abs() {
        return Ok(None);
    }
    // spherical triangle (e1, e2, g): sides d, g2, g1; angle at e2
    let c = (g1.cos() - d.cos() * g2.cos()) / (d.sin() * g2.sin());
    Ok(Some(2.0 * c.clamp(-1.0, 1.0).acos()))
}

/// Lower bound on the distance between two bicones (convex sets): the best
/// separating gap found over a set of candidate directions, refined by a
/// local search on the sphere. Positive result certifies disjointness.
pub fn separation_lower_bound(b1: &Bicone, b2: &Bicone) -> f64 {
    let gap = |u: Vec3| -> f64 {
        let u = match u.normalized() {
            Some(u) => u,
            None => return f64::NEG_INFINITY,
        };
        // b1 below, b2 above along u
        -b2.support(-u) - b1.support(u)
    };
    let mut best_u = b2.center() - b1.center();
    let mut best = gap(best_u);
    let seeds = [
        b2.apex_a - b1.apex_a,
        b2.apex_a - b1.apex_b,
        b2.apex_b - b1.apex_a,
        b2.apex_b - b1.apex_b,
        closest_axis_direction(b1, b2),
    ];
    for s in seeds {
        let g = gap(s);
        if g > best {
            best = g;
            best_u = s;
        }
    }
    let mut u = best_u.normalized().unwrap_or(Vec3::X);
    let mut step = 0.25;
    while step > 1e-10 {
        let e1 = u.any_orthogonal();
        let e2 = u.cross(e1);
        let mut moved = false;
        for d in [e1, -e1, e2, -e2, (e1 + e2) * 0.7071, (e1 - e2) * 0.7071, (-e1 + e2) * 0.7071, (-e1 - e2) * 0.7071] {
            let cand = (u + d * step).normalized().unwrap();
            let g = gap(cand);
            if g > best {
                best = g;
                u = cand;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

fn closest_axis_direction(b1: &Bicone, b2: &Bicone) -> Vec3 {
    // closest points of the two axis segments, by coarse search + refinement
    let seg = |b: &Bicone, t: f64| b.apex_a.lerp(b.apex_b, t);
    let mut best = (f64::INFINITY, 0.5, 0.5);
    for i in 0..=20 {
        for j in 0..=20 {
            let (s, t) = (i as f64 / 20.0, j as f64 / 20.0);
            let d = seg(b1, s).dist(seg(b2, t));
            if d < best.0 {
                best = (d, s, t);
            }
        }
    }
    seg(b2, best.2) - seg(b1, best.1)
}

/// Ratio bound `(d + r) / (d - r)` for displacements of a homothety-rotation
/// about a line in the plane, over a ball at distance `d` from the plane.
pub fn ball_displacement_ratio(center: Vec3, r: f64, plane_point: Vec3, plane_normal: Vec3) -> Result<f64> {
    let n = plane_normal
        .normalized()
        .ok_or_else(|| Error::InvalidInput("zero plane normal".into()))?;
    if r < 0.0 {
        return Err(Error::InvalidInput("negative radius".into()));
    }
    let d = (center - plane_point).dot(n).abs();
    if d <= r {
        return Err(Error::Hypothesis("ball touches or crosses the plane".into()));
    }
    Ok((d + r) / (d - r))
}

/// Bounds `(lam1 sqrt(1 - 2 sin a), lam2 sqrt(1 + 2 sin a))`, where `a` is the
/// largest deviation of the pairwise angles of `e1, e2, e3` from a right angle.
/// The lower factor is clamped at 0 once `sin a >= 1/2`.
pub fn skew_frame_bounds(e1: Vec3, e2: Vec3, e3: Vec3, lam1: f64, lam2: f64) -> Result<(f64, f64)> {
    for e in [e1, e2, e3] {
        if (e.norm() - 1.0).abs() > super::ANGLE_TOL {
            return Err(Error::InvalidInput("frame vectors must be unit".into()));
        }
    }
    if !(lam1 > 0.0 && lam1 <= lam2) {
        return Err(Error::InvalidInput("need 0 < lam1 <= lam2".into()));
    }
    let dev = [e1.angle(e2), e1.angle(e3), e2.angle(e3)]
        .iter()
        .map(|a| (a - FRAC_PI_2).abs())
        .fold(0.0, f64::max);
    if dev >= FRAC_PI_2 {
        return Err(Error::Degenerate("frame vectors are parallel".into()));
    }
    Ok(skew_bounds_for_angle(dev, lam1, lam2))
}

/// The same bounds for a given deviation angle.
pub fn skew_bounds_for_angle(alpha: f64, lam1: f64, lam2: f64) -> (f64, f64) {
    let s = alpha.sin();
    (lam1 * (1.0 - 2.0 * s).max(0.0).sqrt(), lam2 * (1.0 + 2.0 * s).sqrt())
}
