//! Locating critical points of a densely sampled smooth function from five
//! families of tangent lines: horizontal, steep (±m1) and shallow (±m2).
//!
//! A critical point at height `t` is bracketed by the steep tangents on its
//! two flanks. Their crossings with `y = t` form a narrow triangle base
//! `(x1, x2)`; the shallow tangents cross `y = t` at `x3, x4` inside it, and
//! extrapolating the two crossing pairs to zero slope estimates the x
//! coordinate.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Angle, Line};
use crate::persistence::{critical_heights, sublevel_diagram, CriticalKind, CriticalPoint};
use crate::sampling::SampledFunction;

pub const DEFAULT_TAU: f64 = 0.08;
pub const DEFAULT_STEEP_DEG: f64 = 30.0;
pub const DEFAULT_SHALLOW_DEG: f64 = 0.1;

const DEGENERATE_TOL: f64 = 1e-12;
/// Shallow crossings closer than this count as one point.
const COINCIDE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothConfig {
    /// Largest accepted triangle base.
    pub tau: f64,
    /// Inclination of the steep tangents, in degrees from horizontal.
    pub steep_deg: f64,
    /// Inclination of the shallow tangents, in degrees from horizontal.
    pub shallow_deg: f64,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        SmoothConfig { tau: DEFAULT_TAU, steep_deg: DEFAULT_STEEP_DEG, shallow_deg: DEFAULT_SHALLOW_DEG }
    }
}

impl SmoothConfig {
    pub fn new(tau: f64, steep_deg: f64, shallow_deg: f64) -> Result<Self> {
        let cfg = SmoothConfig { tau, steep_deg, shallow_deg };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig(format!("tau must be positive, got {}", self.tau)));
        }
        if !(0.0 < self.shallow_deg && self.shallow_deg < self.steep_deg && self.steep_deg < 90.0) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < shallow < steep < 90 degrees, got shallow {} and steep {}",
                self.shallow_deg, self.steep_deg
            )));
        }
        Ok(())
    }

    pub fn steep_slope(&self) -> f64 {
        self.steep_deg.to_radians().tan()
    }

    pub fn shallow_slope(&self) -> f64 {
        self.shallow_deg.to_radians().tan()
    }
}

/// Candidate bracket of a critical point on the horizontal line `y = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub t: f64,
    /// Height of the slope `-m` tangent.
    pub r: f64,
    /// Height of the slope `+m` tangent.
    pub s: f64,
    pub x1: f64,
    pub x2: f64,
    /// Whether `x1` is the crossing of the `-m` tangent, which holds for
    /// minima.
    pub r_first: bool,
}

impl Triangle {
    pub fn base(&self) -> f64 {
        self.x2 - self.x1
    }

    /// Crossings of the `-m` and `+m` tangents, in that order.
    fn r_s(&self) -> (f64, f64) {
        if self.r_first {
            (self.x1, self.x2)
        } else {
            (self.x2, self.x1)
        }
    }

    pub fn kind(&self) -> CriticalKind {
        if self.r_first {
            CriticalKind::LocalMin
        } else {
            CriticalKind::LocalMax
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothReconstruction {
    pub critical_points: Vec<CriticalPoint>,
    pub alternation_ok: bool,
}

fn direction_for(slope: f64) -> Angle {
    Angle::from_orthogonal_slope(slope).expect("finite slope")
}

/// Heights of the critical lines with the given slope for the polyline
/// through the samples.
pub fn tangent_heights(f: &SampledFunction, slope: f64) -> Vec<f64> {
    critical_heights(&sublevel_diagram(&f.points(), direction_for(slope)))
}

/// x where the line of slope `slope` at `height` meets `y = t`.
fn crossing(slope: f64, height: f64, t: f64) -> f64 {
    Line::new(direction_for(slope), height).x_at_height(t).expect("not horizontal")
}

/// All `(t, r, s)` whose `-m` and `+m` lines cross `y = t` less than `tau`
/// apart. `r` heights come from slope `-m`, `s` heights from slope `+m`.
pub fn detect_triangles(t: &[f64], s: &[f64], r: &[f64], m: f64, tau: f64) -> Vec<Triangle> {
    let mut out = Vec::new();
    for &ti in t {
        let xr: Vec<f64> = r.iter().map(|&ri| crossing(-m, ri, ti)).collect();
        let xs: Vec<f64> = s.iter().map(|&si| crossing(m, si, ti)).collect();
        for (&ri, &a) in r.iter().zip(&xr) {
            for (&si, &b) in s.iter().zip(&xs) {
                if (a - b).abs() < tau {
                    out.push(Triangle { t: ti, r: ri, s: si, x1: a.min(b), x2: a.max(b), r_first: a <= b });
                }
            }
        }
    }
    out
}

/// Extrapolates the steep crossings `(x1, x2)` at slope `m1` and the
/// shallow crossings `(x3, x4)` at slope `m2` to zero slope.
pub fn compute_x(x1: f64, x2: f64, x3: f64, x4: f64, m1: f64, m2: f64) -> Result<f64> {
    let den = 2.0 * m2 * (x3 - x4) - 2.0 * m1 * (x1 - x2);
    if den.abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateEstimator(den));
    }
    Ok((m2 * (x1 + x2) * (x3 - x4) - m1 * (x1 - x2) * (x3 + x4)) / den)
}

/// Validates triangles against given shallow tangent heights and estimates
/// one critical point per validated triangle.
///
/// A triangle is validated by a pair of shallow tangents, `rr` with slope
/// `-m2` and `ss` with slope `+m2`, whose crossings with `y = t` lie strictly
/// inside `(x1, x2)`, not in the opposite order to the steep crossings. On a
/// sampled function both shallow tangents often touch the same extreme
/// sample, making the two crossings coincide. Each pair
/// validates at most one triangle, which removes duplicate detections of the
/// same point. Estimates outside the open `domain` are dropped.
pub fn locate_with_shallow(
    triangles: &[Triangle],
    rr: &[f64],
    ss: &[f64],
    m1: f64,
    m2: f64,
    domain: (f64, f64),
) -> Vec<CriticalPoint> {
    let mut order: Vec<&Triangle> = triangles.iter().collect();
    order.sort_by(|a, b| a.base().total_cmp(&b.base()).then(a.t.total_cmp(&b.t)));

    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    for tri in order {
        let inside = |x: f64| tri.x1 < x && x < tri.x2;
        let (xr, xs) = tri.r_s();
        let rr_x: Vec<(usize, f64)> =
            rr.iter().enumerate().map(|(i, &h)| (i, crossing(-m2, h, tri.t))).filter(|&(_, x)| inside(x)).collect();
        if rr_x.is_empty() {
            continue;
        }
        let pair = ss.iter().enumerate().find_map(|(j, &h)| {
            let x4 = crossing(m2, h, tri.t);
            if !inside(x4) {
                return None;
            }
            rr_x.iter()
                .find(|&&(i, x3)| {
                    ((x3 - x4).abs() <= COINCIDE_TOL || (x3 < x4) == tri.r_first) && !used.contains(&(i, j))
                })
                .map(|&(i, x3)| (i, j, x3, x4))
        });
        let Some((i, j, x3, x4)) = pair else { continue };
        let Ok(x) = compute_x(xr, xs, x3, x4, m1, m2) else { continue };
        if !(x > domain.0 && x < domain.1) {
            continue;
        }
        used.insert((i, j));
        out.push(CriticalPoint::new(x, tri.t, tri.kind()));
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    out
}

/// [`locate_with_shallow`] with shallow tangents taken from `f`.
pub fn filter_and_locate(triangles: &[Triangle], f: &SampledFunction, cfg: &SmoothConfig) -> Vec<CriticalPoint> {
    let m2 = cfg.shallow_slope();
    let rr = tangent_heights(f, -m2);
    let ss = tangent_heights(f, m2);
    locate_with_shallow(triangles, &rr, &ss, cfg.steep_slope(), m2, f.domain())
}

/// Whether minima and maxima strictly alternate, ignoring endpoints.
pub fn alternation_check(points: &[CriticalPoint]) -> bool {
    let kinds: Vec<CriticalKind> = points.iter().map(|p| p.kind).filter(|&k| k != CriticalKind::Endpoint).collect();
    kinds.windows(2).all(|w| w[0] != w[1])
}

/// Triangles of `f` at the steep slope, excluding those on horizontal lines
/// through an endpoint value (endpoint births are not interior points).
fn steep_triangles(f: &SampledFunction, cfg: &SmoothConfig) -> Vec<Triangle> {
    let m1 = cfg.steep_slope();
    let t: Vec<f64> = tangent_heights(f, 0.0).into_iter().filter(|&h| h != f.first().y && h != f.last().y).collect();
    let r = tangent_heights(f, -m1);
    let s = tangent_heights(f, m1);
    detect_triangles(&t, &s, &r, m1, cfg.tau)
}

/// Full five-line pipeline. Endpoints are never reported.
pub fn five_line_reconstruct(f: &SampledFunction, cfg: &SmoothConfig) -> Result<SmoothReconstruction> {
    cfg.validate()?;
    let triangles = steep_triangles(f, cfg);
    let critical_points = filter_and_locate(&triangles, f, cfg);
    let alternation_ok = alternation_check(&critical_points);
    Ok(SmoothReconstruction { critical_points, alternation_ok })
}

/// Repeats the shallow step with the shallow angle halved each round,
/// starting from half the steep angle, keeping the steep triangles fixed.
/// Returns the estimates of every round.
pub fn refine(f: &SampledFunction, cfg: &SmoothConfig, rounds: usize) -> Result<Vec<Vec<CriticalPoint>>> {
    cfg.validate()?;
    let triangles = steep_triangles(f, cfg);
    let mut shallow = cfg.steep_deg;
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        shallow /= 2.0;
        let round = SmoothConfig { shallow_deg: shallow, ..*cfg };
        out.push(filter_and_locate(&triangles, f, &round));
    }
    Ok(out)
}
