//! Coordinate transforms: projective pixel→Cartesian mapping and the
//! Cartesian→polar→lane→relative-lane chain used as model input.
//!
//! Lane coordinates straighten a circular track: `s` is the track-aligned
//! arc length (unwrapped angle times a fixed reference radius) and `d` the
//! distance to the track center. Relative lane coordinates subtract the
//! ego's pose at the reference frame, so the ego sits at the origin.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DET_EPS: f64 = 1e-12;
const W_EPS: f64 = 1e-12;

/// Homogeneous planar map (3×3, invertible).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap {
    h: Matrix3<f64>,
}

impl ProjectiveMap {
    pub fn new(h: Matrix3<f64>) -> Result<Self> {
        let det = h.determinant();
        if !det.is_finite() || det.abs() <= DET_EPS {
            return Err(Error::Numerical(format!(
                "projective map is not invertible (det = {det:e})"
            )));
        }
        Ok(Self { h })
    }

    pub fn identity() -> Self {
        Self {
            h: Matrix3::identity(),
        }
    }

    /// Build from 9 row-major entries (the config-file serialization).
    pub fn from_rows(rows: [f64; 9]) -> Result<Self> {
        Self::new(Matrix3::from_row_slice(&rows))
    }

    pub fn to_rows(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                out[r * 3 + c] = self.h[(r, c)];
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .h
            .try_inverse()
            .ok_or_else(|| Error::Numerical("projective map is not invertible".into()))?;
        Self::new(inv)
    }

    /// Least-squares estimate from ≥ 4 point correspondences (src → dst),
    /// fixing the lower-right entry to 1.
    pub fn from_correspondences(pairs: &[((f64, f64), (f64, f64))]) -> Result<Self> {
        if pairs.len() < 4 {
            return Err(Error::Input(format!(
                "homography estimation needs at least 4 correspondences, got {}",
                pairs.len()
            )));
        }
        let n = pairs.len();
        let mut a = DMatrix::<f64>::zeros(2 * n, 8);
        let mut b = DVector::<f64>::zeros(2 * n);
        for (i, &((px, py), (qx, qy))) in pairs.iter().enumerate() {
            let r = 2 * i;
            a[(r, 0)] = px;
            a[(r, 1)] = py;
            a[(r, 2)] = 1.0;
            a[(r, 6)] = -qx * px;
            a[(r, 7)] = -qx * py;
            b[r] = qx;
            a[(r + 1, 3)] = px;
            a[(r + 1, 4)] = py;
            a[(r + 1, 5)] = 1.0;
            a[(r + 1, 6)] = -qy * px;
            a[(r + 1, 7)] = -qy * py;
            b[r + 1] = qy;
        }
        let svd = a.svd(true, true);
        let h8 = svd
            .solve(&b, 1e-12)
            .map_err(|e| Error::Numerical(format!("homography solve failed: {e}")))?;
        let h = Matrix3::new(h8[0], h8[1], h8[2], h8[3], h8[4], h8[5], h8[6], h8[7], 1.0);
        Self::new(h)
    }
}

/// Apply a projective map: p ↦ dehomogenize(H · [px, py, 1]).
pub fn project_points(map: &ProjectiveMap, pts: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    pts.iter()
        .map(|&(x, y)| {
            let v = map.h * Vector3::new(x, y, 1.0);
            if v.z.abs() < W_EPS {
                return Err(Error::Numerical(format!(
                    "degenerate point ({x}, {y}): homogeneous w = {:e}",
                    v.z
                )));
            }
            Ok((v.x / v.z, v.y / v.z))
        })
        .collect()
}

/// Circular-track frame: center of the track and the fixed radius used to
/// convert unwrapped angles into arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaneFrame {
    pub center_x: f64,
    pub center_y: f64,
    pub ref_radius: f64,
}

impl LaneFrame {
    pub fn new(center_x: f64, center_y: f64, ref_radius: f64) -> Result<Self> {
        if !ref_radius.is_finite() || ref_radius <= 0.0 {
            return Err(Error::Config(format!(
                "ref_radius must be positive and finite, got {ref_radius}"
            )));
        }
        Ok(Self {
            center_x,
            center_y,
            ref_radius,
        })
    }

    pub fn center(&self) -> (f64, f64) {
        (self.center_x, self.center_y)
    }
}

/// Angle/radius pair about a lane frame's center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    /// Radians in (−π, π].
    pub angle: f64,
    /// Meters from the center.
    pub radius: f64,
}

/// Cartesian → polar about the frame center. Errors on a point at the center.
pub fn cartesian_to_polar(pts: &[(f64, f64)], frame: &LaneFrame) -> Result<Vec<PolarPoint>> {
    pts.iter()
        .map(|&(x, y)| {
            let dx = x - frame.center_x;
            let dy = y - frame.center_y;
            let radius = (dx * dx + dy * dy).sqrt();
            if radius < 1e-12 {
                return Err(Error::Numerical(format!(
                    "point ({x}, {y}) coincides with the lane center"
                )));
            }
            Ok(PolarPoint {
                angle: dy.atan2(dx),
                radius,
            })
        })
        .collect()
}

/// Inverse of [`cartesian_to_polar`].
pub fn polar_to_cartesian(pts: &[PolarPoint], frame: &LaneFrame) -> Vec<(f64, f64)> {
    pts.iter()
        .map(|p| {
            (
                frame.center_x + p.radius * p.angle.cos(),
                frame.center_y + p.radius * p.angle.sin(),
            )
        })
        .collect()
}

/// Wrap an angle difference into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// Polar trajectory → lane coordinates (s = arc length, d = radius).
///
/// The angle sequence is unwrapped first; a consecutive angular step of π or
/// more cannot be disambiguated and is rejected.
pub fn polar_to_lane(pts: &[PolarPoint], frame: &LaneFrame) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(pts.len());
    let mut unwrapped = 0.0;
    for (i, p) in pts.iter().enumerate() {
        if i == 0 {
            unwrapped = p.angle;
        } else {
            let step = wrap_angle(p.angle - pts[i - 1].angle);
            if step.abs() >= std::f64::consts::PI - 1e-12 {
                return Err(Error::Data(format!(
                    "angular step {:.4} rad at index {i} is ambiguous (cannot unwrap)",
                    step
                )));
            }
            unwrapped += step;
        }
        out.push((unwrapped * frame.ref_radius, p.radius));
    }
    Ok(out)
}

/// Subtract the ego's reference pose from every point of every trajectory.
/// The ego's reference point maps to (0, 0).
pub fn to_relative_lane(trajs: &[Vec<(f64, f64)>], ego_ref: (f64, f64)) -> Vec<Vec<(f64, f64)>> {
    trajs
        .iter()
        .map(|t| t.iter().map(|&(s, d)| (s - ego_ref.0, d - ego_ref.1)).collect())
        .collect()
}
