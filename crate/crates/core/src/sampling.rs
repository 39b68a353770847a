//! Functions given as values on a uniform grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::persistence::PLFunction;

/// Default grid density for smooth functions, in samples per unit length.
pub const DEFAULT_SAMPLES_PER_UNIT: f64 = 1e4;

/// Relative tolerance on grid spacing when validating uniformity.
const UNIFORM_RTOL: f64 = 1e-6;

/// Values `ys[i] = f(xs[i])` on a strictly increasing uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampledRepr", into = "SampledRepr")]
pub struct SampledFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SampledRepr {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TryFrom<SampledRepr> for SampledFunction {
    type Error = Error;
    fn try_from(r: SampledRepr) -> Result<Self> {
        SampledFunction::new(r.xs, r.ys)
    }
}

impl From<SampledFunction> for SampledRepr {
    fn from(s: SampledFunction) -> Self {
        SampledRepr { xs: s.xs, ys: s.ys }
    }
}

impl SampledFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidSamples(format!("{} grid points but {} values", xs.len(), ys.len())));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidSamples("need at least 2 samples".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples("non-finite sample".into()));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidSamples("grid is not increasing".into()));
        }
        for (i, w) in xs.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step <= 0.0 || (step - h).abs() > UNIFORM_RTOL * h {
                return Err(Error::InvalidSamples(format!("grid not uniform at index {}", i + 1)));
            }
        }
        Ok(SampledFunction { xs, ys })
    }

    /// Samples `f` at `n` evenly spaced points of `[a, b]`, endpoints included.
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(a < b) || n < 2 {
            return Err(Error::InvalidSamples(format!("bad grid [{a}, {b}] with {n} points")));
        }
        let last = (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * (i as f64) / last }).collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        SampledFunction::new(xs, ys)
    }

    /// Grid with roughly `per_unit` samples per unit length on `[a, b]`.
    pub fn from_fn_density(a: f64, b: f64, per_unit: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = ((b - a) * per_unit).round().max(1.0) as usize + 1;
        Self::from_fn(a, b, n, f)
    }

    pub fn from_pl(f: &PLFunction, per_unit: f64) -> Result<Self> {
        let (a, b) = f.domain();
        Self::from_fn_density(a, b, per_unit, |x| f.eval(x))
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn first(&self) -> Point2 {
        Point2::new(self.xs[0], self.ys[0])
    }

    pub fn last(&self) -> Point2 {
        let n = self.xs.len() - 1;
        Point2::new(self.xs[n], self.ys[n])
    }

    pub fn max_value(&self) -> f64 {
        self.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// The samples as polyline vertices.
    pub fn points(&self) -> Vec<Point2> {
        self.xs.iter().zip(&self.ys).map(|(&x, &y)| Point2::new(x, y)).collect()
    }
}
