//! Zero-dimensional sublevel-set persistence of function graphs along a
//! direction, critical lines, and direction admissibility.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{slope_of, Angle, Point2};

/// A continuous piecewise-linear function on `[a, b]`, given by its vertices.
///
/// x-coordinates are strictly increasing and no segment is horizontal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PLFunctionRepr", into = "PLFunctionRepr")]
pub struct PLFunction {
    vertices: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct PLFunctionRepr {
    vertices: Vec<[f64; 2]>,
}

impl TryFrom<PLFunctionRepr> for PLFunction {
    type Error = Error;
    fn try_from(r: PLFunctionRepr) -> Result<Self> {
        PLFunction::new(r.vertices.into_iter().map(|[x, y]| Point2::new(x, y)).collect())
    }
}

impl From<PLFunction> for PLFunctionRepr {
    fn from(f: PLFunction) -> Self {
        PLFunctionRepr { vertices: f.vertices.iter().map(|p| [p.x, p.y]).collect() }
    }
}

impl PLFunction {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidFunction("need at least 2 vertices".into()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite vertex {p:?}")));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[1].x <= w[0].x {
                return Err(Error::InvalidFunction(format!("x not strictly increasing at vertex {}", i + 1)));
            }
            if w[1].y == w[0].y {
                return Err(Error::InvalidFunction(format!("horizontal segment between vertices {i} and {}", i + 1)));
            }
        }
        Ok(PLFunction { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.vertices[0].x, self.vertices[self.vertices.len() - 1].x)
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        self.vertices[self.vertices.len() - 1]
    }

    /// Segment slopes, one per consecutive vertex pair.
    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        self.vertices.windows(2).map(|w| (w[1].y - w[0].y) / (w[1].x - w[0].x))
    }

    pub fn max_value(&self) -> f64 {
        self.vertices.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Linear interpolation; `x` is clamped to the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let v = &self.vertices;
        if x <= v[0].x {
            return v[0].y;
        }
        if x >= v[v.len() - 1].x {
            return v[v.len() - 1].y;
        }
        let i = v.partition_point(|p| p.x <= x);
        let (p, q) = (v[i - 1], v[i]);
        p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)
    }
}

/// Death coordinate of a persistence pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Death {
    Finite(f64),
    Infinite,
}

impl Death {
    pub fn finite(self) -> Option<f64> {
        match self {
            Death::Finite(d) => Some(d),
            Death::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Death::Infinite)
    }
}

impl PartialOrd for Death {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Death::Finite(a), Death::Finite(b)) => a.partial_cmp(b),
            (Death::Finite(_), Death::Infinite) => Some(Ordering::Less),
            (Death::Infinite, Death::Finite(_)) => Some(Ordering::Greater),
            (Death::Infinite, Death::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(d) => write!(f, "{d}"),
            Death::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Death {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Death::Finite(d) => s.serialize_f64(*d),
            Death::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Death {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v.is_finite() => Ok(Death::Finite(v)),
            Raw::Num(v) => Err(de::Error::custom(format!("non-finite death {v}"))),
            Raw::Str(s) if s == "inf" => Ok(Death::Infinite),
            Raw::Str(s) => Err(de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePoint {
    pub birth: f64,
    pub death: Death,
}

impl PersistencePoint {
    pub fn finite(birth: f64, death: f64) -> Self {
        PersistencePoint { birth, death: Death::Finite(death) }
    }

    pub fn essential(birth: f64) -> Self {
        PersistencePoint { birth, death: Death::Infinite }
    }
}

/// H0 persistence diagram of the sublevel filtration in one direction.
///
/// Holds exactly one essential point. Points are kept sorted by
/// `(birth, death)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct Diagram {
    direction: Angle,
    points: Vec<PersistencePoint>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    direction_deg: f64,
    points: Vec<PersistencePoint>,
}

impl TryFrom<DiagramRepr> for Diagram {
    type Error = Error;
    fn try_from(r: DiagramRepr) -> Result<Self> {
        Diagram::new(Angle::from_degrees(r.direction_deg)?, r.points)
    }
}

impl From<Diagram> for DiagramRepr {
    fn from(d: Diagram) -> Self {
        DiagramRepr { direction_deg: d.direction.degrees(), points: d.points }
    }
}

impl Diagram {
    pub fn new(direction: Angle, mut points: Vec<PersistencePoint>) -> Result<Self> {
        let essential = points.iter().filter(|p| p.death.is_infinite()).count();
        if essential != 1 {
            return Err(Error::InvalidDiagram(format!("expected exactly one essential point, found {essential}")));
        }
        for p in &points {
            if !p.birth.is_finite() {
                return Err(Error::InvalidDiagram(format!("non-finite birth {}", p.birth)));
            }
            if let Death::Finite(d) = p.death {
                if !(p.birth < d) {
                    return Err(Error::InvalidDiagram(format!("birth {} not below death {d}", p.birth)));
                }
            }
        }
        points
            .sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.partial_cmp(&b.death).unwrap_or(Ordering::Equal)));
        Ok(Diagram { direction, points })
    }

    pub fn direction(&self) -> Angle {
        self.direction
    }

    pub fn points(&self) -> &[PersistencePoint] {
        &self.points
    }

    pub fn essential_birth(&self) -> f64 {
        self.points
            .iter()
            .find(|p| p.death.is_infinite())
            .map(|p| p.birth)
            .expect("diagram invariant: one essential point")
    }

    /// Finite `(birth, death)` pairs.
    pub fn finite_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().filter_map(|p| p.death.finite().map(|d| (p.birth, d)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    LocalMin,
    LocalMax,
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub kind: CriticalKind,
}

impl CriticalPoint {
    pub fn new(x: f64, y: f64, kind: CriticalKind) -> Self {
        CriticalPoint { x, y, kind }
    }

    pub fn point(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Endpoints plus every interior vertex where the slope changes sign.
pub fn critical_points(f: &PLFunction) -> Vec<CriticalPoint> {
    let v = f.vertices();
    let slopes: Vec<f64> = f.slopes().collect();
    let mut out = Vec::with_capacity(v.len());
    out.push(CriticalPoint::new(v[0].x, v[0].y, CriticalKind::Endpoint));
    for i in 1..v.len() - 1 {
        let (l, r) = (slopes[i - 1], slopes[i]);
        if l > 0.0 && r < 0.0 {
            out.push(CriticalPoint::new(v[i].x, v[i].y, CriticalKind::LocalMax));
        } else if l < 0.0 && r > 0.0 {
            out.push(CriticalPoint::new(v[i].x, v[i].y, CriticalKind::LocalMin));
        }
    }
    let last = v[v.len() - 1];
    out.push(CriticalPoint::new(last.x, last.y, CriticalKind::Endpoint));
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
}

/// H0 sublevel persistence of the polyline through `vertices` (in path
/// order) along `direction`.
///
/// Vertices enter at their projection and edges at the larger projection of
/// their endpoints. Equal projections are processed in vertex order, and on
/// a merge the younger component dies (elder rule). Zero-length pairs are
/// dropped. Unlike [`directional_diagram`] this accepts any non-empty vertex
/// list, which is how dense samples of smooth functions enter.
pub fn sublevel_diagram(vertices: &[Point2], direction: Angle) -> Diagram {
    assert!(!vertices.is_empty(), "sublevel_diagram needs at least one vertex");
    let heights: Vec<f64> = vertices.iter().map(|&p| direction.project(p)).collect();
    let mut order: Vec<usize> = (0..heights.len()).collect();
    order.sort_by(|&a, &b| heights[a].total_cmp(&heights[b]).then(a.cmp(&b)));
    // rank[i] is the processing position; a smaller rank is an older birth.
    let mut rank = vec![0usize; heights.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut uf = UnionFind::new(heights.len());
    let mut entered = vec![false; heights.len()];
    let mut points = Vec::new();
    for &i in &order {
        entered[i] = true;
        let h = heights[i];
        let neighbours = [i.checked_sub(1), (i + 1 < heights.len()).then_some(i + 1)];
        for j in neighbours.into_iter().flatten() {
            if !entered[j] {
                continue;
            }
            let (ri, rj) = (uf.find(i), uf.find(j));
            if ri == rj {
                continue;
            }
            // Roots are always the oldest vertex of their component.
            let (elder, younger) = if rank[ri] < rank[rj] { (ri, rj) } else { (rj, ri) };
            if heights[younger] < h {
                points.push(PersistencePoint::finite(heights[younger], h));
            }
            uf.parent[younger] = elder;
        }
    }
    points.push(PersistencePoint::essential(heights[order[0]]));
    Diagram::new(direction, points).expect("sweep produces a valid diagram")
}

/// Persistence diagram of the graph of `f` filtered by height along `v`.
pub fn directional_diagram(f: &PLFunction, v: Angle) -> Diagram {
    sublevel_diagram(f.vertices(), v)
}

/// Heights of the critical lines orthogonal to the diagram's direction:
/// every birth and every finite death, ascending and deduplicated.
pub fn critical_heights(d: &Diagram) -> Vec<f64> {
    let mut hs: Vec<f64> = d.points().iter().flat_map(|p| std::iter::once(p.birth).chain(p.death.finite())).collect();
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    hs
}

/// Smallest absolute segment slope.
pub fn min_abs_slope(f: &PLFunction) -> f64 {
    f.slopes().map(f64::abs).fold(f64::INFINITY, f64::min)
}

/// Sufficient admissibility test: at every interior critical point the
/// orthogonal lines are strictly shallower than both incident segments.
pub fn is_admissible(f: &PLFunction, v: Angle) -> bool {
    if v.is_vertical() {
        return true;
    }
    let m = slope_of(v).abs();
    let slopes: Vec<f64> = f.slopes().collect();
    (1..f.vertices().len() - 1).all(|i| {
        let (l, r) = (slopes[i - 1], slopes[i]);
        let critical = (l > 0.0) != (r > 0.0);
        !critical || (m < l.abs() && m < r.abs())
    })
}
