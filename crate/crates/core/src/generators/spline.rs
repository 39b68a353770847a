use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_domain, smooth_truth, Smooth, SmoothCase, SmoothModel};
use crate::error::{Error, Result};
use crate::sampling::SampledFunction;

pub const DEFAULT_KNOTS: usize = 30;

/// Natural cubic spline on uniform knots, stored as knot values and second
/// derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSpline {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub second: Vec<f64>,
}

impl CubicSpline {
    /// Interpolates `ys` at `knots` evenly spaced points of `domain` with zero
    /// second derivative at both ends.
    pub fn natural(domain: (f64, f64), ys: Vec<f64>) -> Result<Self> {
        check_domain(domain)?;
        let n = ys.len();
        if n < 4 {
            return Err(Error::InvalidConfig("a spline needs at least 4 knots".into()));
        }
        let (a, b) = domain;
        let h = (b - a) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| if i + 1 == n { b } else { a + h * i as f64 }).collect();

        // Interior equations: M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h².
        let m = n - 2;
        let rhs: Vec<f64> = (1..n - 1).map(|i| 6.0 * (ys[i + 1] - 2.0 * ys[i] + ys[i - 1]) / (h * h)).collect();
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = 1.0 / 4.0;
        d[0] = rhs[0] / 4.0;
        for i in 1..m {
            let denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs[i] - d[i - 1]) / denom;
        }
        let mut inner = vec![0.0; m];
        inner[m - 1] = d[m - 1];
        for i in (0..m - 1).rev() {
            inner[i] = d[i] - c[i] * inner[i + 1];
        }
        let mut second = Vec::with_capacity(n);
        second.push(0.0);
        second.extend(inner);
        second.push(0.0);
        Ok(CubicSpline { xs, ys, second })
    }

    fn step(&self) -> f64 {
        (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64
    }

    /// Segment index and local offset, clamped to the domain.
    fn locate(&self, x: f64) -> (usize, f64) {
        let h = self.step();
        let last = self.xs.len() - 2;
        let i = (((x - self.xs[0]) / h).floor().max(0.0) as usize).min(last);
        (i, x - self.xs[i])
    }

    /// Power-basis coefficients `[c0, c1, c2, c3]` of segment `i` in the
    /// local offset.
    fn coefficients(&self, i: usize) -> [f64; 4] {
        let h = self.step();
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        [y0, (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0, m0 / 2.0, (m1 - m0) / (6.0 * h)]
    }

    /// Interior zeros of the derivative, from the quadratic on each segment.
    pub fn derivative_roots(&self) -> Vec<f64> {
        let h = self.step();
        let segments = self.xs.len() - 1;
        let mut roots = Vec::new();
        for i in 0..segments {
            let [_, c1, c2, c3] = self.coefficients(i);
            let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
            let mut local = Vec::with_capacity(2);
            if qa.abs() < 1e-14 * (qb.abs() + qc.abs()).max(1e-300) {
                if qb != 0.0 {
                    local.push(-qc / qb);
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 {
                    // Cancellation-free quadratic formula.
                    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
                    if q != 0.0 {
                        local.push(q / qa);
                        local.push(qc / q);
                    } else {
                        local.push(0.0);
                    }
                }
            }
            local.sort_by(f64::total_cmp);
            local.dedup();
            for t in local {
                // Half-open segments so a root on a knot is counted once.
                let inside = if i + 1 == segments { t >= 0.0 && t <= h } else { t >= 0.0 && t < h };
                let x = self.xs[i] + t;
                if inside && x > self.xs[0] && x < self.xs[segments] {
                    roots.push(x);
                }
            }
        }
        roots
    }
}

impl Smooth for CubicSpline {
    fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }
    fn value(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let [c0, c1, c2, c3] = self.coefficients(i);
        c0 + t * (c1 + t * (c2 + t * c3))
    }
    fn derivative(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let [_, c1, c2, c3] = self.coefficients(i);
        c1 + t * (2.0 * c2 + 3.0 * t * c3)
    }
    fn second_derivative(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let [_, _, c2, c3] = self.coefficients(i);
        2.0 * c2 + 6.0 * t * c3
    }
}

/// Natural cubic spline through `knots` uniform knots with values uniform in
/// `[0, 1]`.
pub fn gen_spline(seed: u64, domain: (f64, f64), knots: usize, samples_per_unit: f64) -> Result<SmoothCase> {
    check_domain(domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ys: Vec<f64> = (0..knots).map(|_| rng.gen_range(0.0..1.0)).collect();
    let spline = CubicSpline::natural(domain, ys)?;
    let truth = smooth_truth(&spline, &spline.derivative_roots());
    let (a, b) = domain;
    let samples = SampledFunction::from_fn_density(a, b, samples_per_unit, |x| spline.value(x))?;
    Ok(SmoothCase { model: SmoothModel::Spline(spline), samples, truth })
}
