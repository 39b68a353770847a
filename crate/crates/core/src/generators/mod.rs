//! Seeded test functions with ground-truth critical points.
//!
//! Every generator is a pure function of its arguments and seed. Ground truth
//! never goes through the persistence code: PL truth comes from the vertex
//! construction, smooth truth from roots of the analytic derivative.

mod harmonic;
mod pl;
mod spline;

pub use harmonic::{gen_harmonic, Harmonic, HarmonicTerm, HARMONIC_TARGET};
pub use pl::gen_pl;
pub use spline::{gen_spline, CubicSpline, DEFAULT_KNOTS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::persistence::{CriticalKind, CriticalPoint, PLFunction};
use crate::sampling::SampledFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomPl,
    Harmonic,
    Spline,
}

/// What to generate. `n` is the interior critical count for PL functions and
/// the knot count for splines; harmonic functions ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub domain: (f64, f64),
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        check_domain(self.domain)?;
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.family == Family::Spline && self.n < 4 {
            return Err(Error::InvalidConfig("a spline needs at least 4 knots".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_domain((a, b): (f64, f64)) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("invalid domain [{a}, {b}]")))
    }
}

/// Endpoints plus interior critical points sorted by x. This is the
/// `.truth.json` sidecar format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub start: Point2,
    pub end: Point2,
    pub critical_points: Vec<CriticalPoint>,
}

/// A smooth function with value and first two derivatives in closed form.
pub trait Smooth {
    fn domain(&self) -> (f64, f64);
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
    fn second_derivative(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SmoothModel {
    Harmonic(Harmonic),
    Spline(CubicSpline),
}

impl Smooth for SmoothModel {
    fn domain(&self) -> (f64, f64) {
        match self {
            SmoothModel::Harmonic(h) => h.domain(),
            SmoothModel::Spline(s) => s.domain(),
        }
    }
    fn value(&self, x: f64) -> f64 {
        match self {
            SmoothModel::Harmonic(h) => h.value(x),
            SmoothModel::Spline(s) => s.value(x),
        }
    }
    fn derivative(&self, x: f64) -> f64 {
        match self {
            SmoothModel::Harmonic(h) => h.derivative(x),
            SmoothModel::Spline(s) => s.derivative(x),
        }
    }
    fn second_derivative(&self, x: f64) -> f64 {
        match self {
            SmoothModel::Harmonic(h) => h.second_derivative(x),
            SmoothModel::Spline(s) => s.second_derivative(x),
        }
    }
}

/// A generated smooth function, its grid samples and its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCase {
    pub model: SmoothModel,
    pub samples: SampledFunction,
    pub truth: GroundTruth,
}

/// Output of [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Pl(PLFunction, GroundTruth),
    Smooth(SmoothCase),
}

/// Dispatches on the family with default parameters and
/// `samples_per_unit` grid density for smooth families.
pub fn generate(spec: &GenSpec, samples_per_unit: f64) -> Result<Generated> {
    spec.validate()?;
    Ok(match spec.family {
        Family::RandomPl => {
            let (f, t) = gen_pl(spec.n, spec.seed, spec.domain)?;
            Generated::Pl(f, t)
        }
        Family::Harmonic => Generated::Smooth(gen_harmonic(spec.seed, spec.domain, HARMONIC_TARGET, samples_per_unit)?),
        Family::Spline => Generated::Smooth(gen_spline(spec.seed, spec.domain, spec.n, samples_per_unit)?),
    })
}

fn kind_from_curvature(second: f64) -> CriticalKind {
    if second > 0.0 {
        CriticalKind::LocalMin
    } else {
        CriticalKind::LocalMax
    }
}

/// Ground truth for a smooth function from its interior derivative roots.
fn smooth_truth(f: &impl Smooth, roots: &[f64]) -> GroundTruth {
    let (a, b) = f.domain();
    GroundTruth {
        start: Point2::new(a, f.value(a)),
        end: Point2::new(b, f.value(b)),
        critical_points: roots
            .iter()
            .map(|&x| CriticalPoint::new(x, f.value(x), kind_from_curvature(f.second_derivative(x))))
            .collect(),
    }
}

/// Sign changes of `fp` on a uniform grid of `cells` cells over `(a, b)`,
/// each refined by bisection to machine precision.
fn bisect_roots(fp: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> Vec<f64> {
    let step = (b - a) / cells as f64;
    let mut roots = Vec::new();
    let mut lo = a;
    let mut flo = fp(lo);
    for i in 1..=cells {
        let hi = if i == cells { b } else { a + step * i as f64 };
        let fhi = fp(hi);
        if flo == 0.0 {
            if lo > a {
                roots.push(lo);
            }
        } else if flo * fhi < 0.0 {
            let (mut l, mut h, mut fl) = (lo, hi, flo);
            for _ in 0..200 {
                let m = 0.5 * (l + h);
                if m <= l || m >= h {
                    break;
                }
                let fm = fp(m);
                if fm == 0.0 {
                    l = m;
                    h = m;
                    break;
                }
                if (fm < 0.0) == (fl < 0.0) {
                    l = m;
                    fl = fm;
                } else {
                    h = m;
                }
            }
            let x = if fp(l).abs() <= fp(h).abs() { l } else { h };
            if x > a && x < b {
                roots.push(x);
            }
        }
        lo = hi;
        flo = fhi;
    }
    roots
}
