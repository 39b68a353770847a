//! Recovery of a piecewise-linear function's critical points from the
//! critical lines of three directional diagrams.
//!
//! With `0 < θ2 < θ1 < θ0 ≤ π/2` all admissible, the interior critical points
//! are exactly the points where one critical line from each direction meets.
//! [`naive_reconstruct`] tests every triple; [`rolling_ball_reconstruct`]
//! walks, for each `θ1` line, the ordered `θ0` and `θ2` families with two
//! pointers.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersect, Angle, Line, Point2};
use crate::persistence::{critical_heights, directional_diagram, Diagram, PLFunction};

pub const DEFAULT_MATCH_TOL: f64 = 1e-6;
pub const DEFAULT_ANGLES_DEG: [f64; 3] = [90.0, 85.0, 80.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleConfig {
    pub theta0: Angle,
    pub theta1: Angle,
    pub theta2: Angle,
    pub start: Point2,
    pub end: Point2,
    pub match_tol: f64,
}

impl TripleConfig {
    pub fn new(
        theta0: Angle,
        theta1: Angle,
        theta2: Angle,
        start: Point2,
        end: Point2,
        match_tol: f64,
    ) -> Result<Self> {
        let (a0, a1, a2) = (theta0.radians(), theta1.radians(), theta2.radians());
        if !(a2 < a1 && a1 < a0 && a0 <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < θ2 < θ1 < θ0 ≤ 90°, got {}°, {}°, {}°",
                theta0.degrees(),
                theta1.degrees(),
                theta2.degrees()
            )));
        }
        if !(match_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("match_tol must be positive, got {match_tol}")));
        }
        if !(start.x < end.x) {
            return Err(Error::InvalidConfig("start must lie left of end".into()));
        }
        Ok(TripleConfig { theta0, theta1, theta2, start, end, match_tol })
    }

    /// 90°/85°/80° with a 1e-6 match tolerance.
    pub fn with_defaults(start: Point2, end: Point2) -> Result<Self> {
        let [a, b, c] = DEFAULT_ANGLES_DEG.map(|d| Angle::from_degrees(d).expect("valid default"));
        Self::new(a, b, c, start, end, DEFAULT_MATCH_TOL)
    }

    pub fn angles(&self) -> [Angle; 3] {
        [self.theta0, self.theta1, self.theta2]
    }

    /// Whether `p` lies in the vertical strip over the domain, widened by
    /// the match tolerance. Triple points outside it cannot be critical.
    pub fn in_strip(&self, p: Point2) -> bool {
        p.x > self.start.x - self.match_tol && p.x < self.end.x + self.match_tol
    }
}

/// Which of the three directions a critical line belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineFamily {
    /// `θ0`, the `T` lines.
    Theta0,
    /// `θ1`, the `S` lines.
    Theta1,
    /// `θ2`, the `R` lines.
    Theta2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum Warning {
    /// A critical line through no reconstructed point. This happens when a
    /// direction is not admissible for the function, or when one line
    /// carries two triple points.
    UnmatchedLine { family: LineFamily, height: f64 },
}

/// Operation counts of one reconstruction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OpCounts {
    pub sort_comparisons: u64,
    /// Intersection comparisons (one per tested line pair or triple).
    pub match_tests: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.sort_comparisons + self.match_tests
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Start point, recovered interior critical points and end point,
    /// increasing in x.
    pub points: Vec<Point2>,
    pub warnings: Vec<Warning>,
    pub ops: OpCounts,
}

impl Reconstruction {
    /// Points strictly between the supplied start and end.
    pub fn interior(&self) -> &[Point2] {
        &self.points[1..self.points.len() - 1]
    }
}

/// `2 n log2 n + 2 n^2`, the rolling-ball operation bound.
pub fn rolling_ball_bound(n: usize) -> f64 {
    let n = n as f64;
    if n <= 1.0 {
        return 2.0 * n * n;
    }
    2.0 * n * n.log2() + 2.0 * n * n
}

/// Critical heights of `f` in the three configured directions, as `(T, S, R)`.
pub fn line_sets(f: &PLFunction, cfg: &TripleConfig) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let [t, s, r] = cfg.angles().map(|a| critical_heights(&directional_diagram(f, a)));
    (t, s, r)
}

/// Checks that three diagrams match the configured directions and returns
/// their critical heights as `(T, S, R)`.
pub fn line_sets_from_diagrams(
    t: &Diagram,
    s: &Diagram,
    r: &Diagram,
    cfg: &TripleConfig,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    for (d, a) in [t, s, r].into_iter().zip(cfg.angles()) {
        if (d.direction().radians() - a.radians()).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "diagram direction {}° does not match configured {}°",
                d.direction().degrees(),
                a.degrees()
            )));
        }
    }
    Ok((critical_heights(t), critical_heights(s), critical_heights(r)))
}

/// Points accepted so far, merged within the match tolerance.
struct Emitted {
    tol: f64,
    points: Vec<Point2>,
}

impl Emitted {
    fn push(&mut self, p: Point2) {
        if !self.points.iter().any(|q| q.dist(p) < self.tol) {
            self.points.push(p);
        }
    }
}

fn finish(triples: Vec<Point2>, t: &[f64], s: &[f64], r: &[f64], cfg: &TripleConfig, ops: OpCounts) -> Reconstruction {
    let tol = cfg.match_tol;
    let mut interior: Vec<Point2> = triples
        .into_iter()
        .filter(|p| p.x > cfg.start.x && p.x < cfg.end.x && p.dist(cfg.start) >= tol && p.dist(cfg.end) >= tol)
        .collect();
    interior.sort_by(|a, b| a.x.total_cmp(&b.x));

    let mut points = Vec::with_capacity(interior.len() + 2);
    points.push(cfg.start);
    points.extend(interior);
    points.push(cfg.end);

    let mut warnings = Vec::new();
    for (family, heights, angle) in
        [(LineFamily::Theta0, t, cfg.theta0), (LineFamily::Theta1, s, cfg.theta1), (LineFamily::Theta2, r, cfg.theta2)]
    {
        for &h in heights {
            let line = Line::new(angle, h);
            if !points.iter().any(|&p| line.residual(p).abs() < tol) {
                warnings.push(Warning::UnmatchedLine { family, height: h });
            }
        }
    }
    Reconstruction { points, warnings, ops }
}

fn all_triples(t: &[f64], s: &[f64], r: &[f64], cfg: &TripleConfig, ops: &mut OpCounts) -> Vec<Point2> {
    let mut found = Emitted { tol: cfg.match_tol, points: Vec::new() };
    for &ti in t {
        for &ri in r {
            let p_tr = intersect(cfg.theta0, ti, cfg.theta2, ri).expect("distinct directions");
            for &si in s {
                let p_ts = intersect(cfg.theta0, ti, cfg.theta1, si).expect("distinct directions");
                ops.match_tests += 1;
                if p_tr.dist(p_ts) < cfg.match_tol && cfg.in_strip(p_tr) {
                    found.push(p_tr);
                }
            }
        }
    }
    found.points
}

/// Tests every `(t, r, s)` triple: O(|T| |R| |S|).
pub fn naive_reconstruct(t: &[f64], s: &[f64], r: &[f64], cfg: &TripleConfig) -> Reconstruction {
    let mut ops = OpCounts::default();
    let triples = all_triples(t, s, r, cfg, &mut ops);
    finish(triples, t, s, r, cfg, ops)
}

fn counted_sort(v: &mut [f64], descending: bool, counter: &Cell<u64>) {
    v.sort_by(|a, b| {
        counter.set(counter.get() + 1);
        if descending {
            b.total_cmp(a)
        } else {
            a.total_cmp(b)
        }
    });
}

/// Two-pointer search restricted to the domain strip: for every `θ1` line, the intersections with the `θ0`
/// lines (sorted by decreasing height) and with the `θ2` lines (sorted by
/// increasing height) both move right along it, so the pointer whose
/// intersection lies further left is advanced until the two coincide.
pub fn rolling_ball_reconstruct(t: &[f64], s: &[f64], r: &[f64], cfg: &TripleConfig) -> Reconstruction {
    let counter = Cell::new(0u64);
    let mut ts = t.to_vec();
    let mut ss = s.to_vec();
    let mut rs = r.to_vec();
    counted_sort(&mut ts, true, &counter);
    counted_sort(&mut ss, false, &counter);
    counted_sort(&mut rs, false, &counter);
    let mut ops = OpCounts { sort_comparisons: counter.get(), match_tests: 0 };

    let mut found = Emitted { tol: cfg.match_tol, points: Vec::new() };
    for &si in &ss {
        let (mut i, mut j) = (0usize, 0usize);
        while i < rs.len() && j < ts.len() {
            ops.match_tests += 1;
            let p_r = intersect(cfg.theta1, si, cfg.theta2, rs[i]).expect("distinct directions");
            let p_t = intersect(cfg.theta1, si, cfg.theta0, ts[j]).expect("distinct directions");
            if p_r.dist(p_t) < cfg.match_tol {
                if cfg.in_strip(p_r) {
                    found.push(p_r);
                    break;
                }
                // A coincidence outside the domain; keep walking.
                i += 1;
                j += 1;
            } else if p_t.x < p_r.x {
                j += 1;
            } else {
                i += 1;
            }
        }
    }
    finish(found.points, t, s, r, cfg, ops)
}

/// Whether no critical line carries two or more triple points inside the
/// domain strip, the hypothesis under which the searches return exactly the
/// critical points.
pub fn triple_points_generic(t: &[f64], s: &[f64], r: &[f64], cfg: &TripleConfig) -> bool {
    let triples = all_triples(t, s, r, cfg, &mut OpCounts::default());
    [(t, cfg.theta0), (s, cfg.theta1), (r, cfg.theta2)].into_iter().all(|(heights, angle)| {
        heights.iter().all(|&h| {
            let line = Line::new(angle, h);
            triples.iter().filter(|&&p| line.residual(p).abs() < cfg.match_tol).count() <= 1
        })
    })
}

/// Joins consecutive reconstructed points; the `{"vertices": [[x, y], ...]}`
/// file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructedFunction {
    pub vertices: Vec<[f64; 2]>,
}

impl From<&Reconstruction> for ReconstructedFunction {
    fn from(r: &Reconstruction) -> Self {
        ReconstructedFunction { vertices: r.points.iter().map(|p| [p.x, p.y]).collect() }
    }
}
