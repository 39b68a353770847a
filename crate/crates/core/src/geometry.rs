//! Planar primitives: direction angles, points, lines orthogonal to a
//! direction, and pairwise line intersection.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this, `|sin(a0 - a1)|` is treated as zero and the lines as parallel.
pub const PARALLEL_TOL: f64 = 1e-12;

/// A direction `v = (cos θ, sin θ)` on the upper open half circle, `0 < θ < π`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const VERTICAL: Angle = Angle(FRAC_PI_2);

    pub fn from_radians(theta: f64) -> Result<Self> {
        if theta.is_finite() && theta > 0.0 && theta < PI {
            Ok(Angle(theta))
        } else {
            Err(Error::InvalidAngle(theta))
        }
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        // Exact for the common case so that 90° stays bit-identical to π/2.
        if deg == 90.0 {
            return Ok(Self::VERTICAL);
        }
        Self::from_radians(deg.to_radians())
    }

    /// The direction whose orthogonal lines have slope `slope`.
    ///
    /// Slope 0 maps to the vertical direction; negative slopes land in
    /// `(0, π/2)` and positive ones in `(π/2, π)`.
    pub fn from_orthogonal_slope(slope: f64) -> Result<Self> {
        if !slope.is_finite() {
            return Err(Error::InvalidAngle(f64::NAN));
        }
        if slope == 0.0 {
            return Ok(Self::VERTICAL);
        }
        // -1/tan θ = slope  <=>  (cos θ, sin θ) ∝ (-slope, 1)
        Self::from_radians((1.0f64).atan2(-slope))
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn degrees(self) -> f64 {
        if self.0 == FRAC_PI_2 {
            90.0
        } else {
            self.0.to_degrees()
        }
    }

    #[inline]
    pub fn is_vertical(self) -> bool {
        self.0 == FRAC_PI_2
    }

    /// Height of a point along this direction, `x cos θ + y sin θ`.
    #[inline]
    pub fn project(self, p: Point2) -> f64 {
        if self.is_vertical() {
            p.y
        } else {
            p.x * self.0.cos() + p.y * self.0.sin()
        }
    }
}

impl TryFrom<f64> for Angle {
    type Error = Error;
    fn try_from(theta: f64) -> Result<Self> {
        Angle::from_radians(theta)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// The line `{(x, y) : x cos θ + y sin θ = height}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub angle: Angle,
    pub height: f64,
}

impl Line {
    pub fn new(angle: Angle, height: f64) -> Self {
        Line { angle, height }
    }

    pub fn slope(&self) -> f64 {
        slope_of(self.angle)
    }

    /// Signed residual of the line equation at `p`.
    pub fn residual(&self, p: Point2) -> f64 {
        let th = self.angle.radians();
        p.x * th.cos() + p.y * th.sin() - self.height
    }

    /// Point where this line meets the horizontal line `y = y0`.
    pub fn x_at_height(&self, y0: f64) -> Result<f64> {
        Ok(intersect(Angle::VERTICAL, y0, self.angle, self.height)?.x)
    }

    pub fn intersect(&self, other: &Line) -> Result<Point2> {
        intersect(self.angle, self.height, other.angle, other.height)
    }
}

/// Slope `-1/tan θ` of the lines orthogonal to `angle`; exactly zero at `π/2`.
pub fn slope_of(angle: Angle) -> f64 {
    if angle.is_vertical() {
        0.0
    } else {
        -1.0 / angle.radians().tan()
    }
}

/// Intersection of the line at height `t0` orthogonal to `a0` with the line at
/// height `t1` orthogonal to `a1`.
pub fn intersect(a0: Angle, t0: f64, a1: Angle, t1: f64) -> Result<Point2> {
    let (th0, th1) = (a0.radians(), a1.radians());
    let det = (th0 - th1).sin();
    if det.abs() < PARALLEL_TOL {
        return Err(Error::ParallelLines(th0, th1));
    }
    let (s0, c0) = if a0.is_vertical() { (1.0, 0.0) } else { th0.sin_cos() };
    let (s1, c1) = if a1.is_vertical() { (1.0, 0.0) } else { th1.sin_cos() };
    Ok(Point2::new((t1 * s0 - t0 * s1) / det, (t0 * c1 - t1 * c0) / det))
}
