use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bisect_roots, check_domain, smooth_truth, Smooth, SmoothCase, SmoothModel};
use crate::error::{Error, Result};
use crate::sampling::SampledFunction;

/// Default inclusive range for the interior critical count.
pub const HARMONIC_TARGET: (usize, usize) = (20, 30);

const MAX_ROUNDS: usize = 1000;
const ROOT_CELLS: usize = 20_000;

/// `a sin(ω x) + b cos(ω x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub a: f64,
    pub b: f64,
    pub omega: f64,
}

/// `scale * (Σ terms(x - domain.0) - offset)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub terms: Vec<HarmonicTerm>,
    pub offset: f64,
    pub scale: f64,
    pub domain: (f64, f64),
}

impl Harmonic {
    fn raw(&self, x: f64, order: u32) -> f64 {
        let u = x - self.domain.0;
        self.terms
            .iter()
            .map(|t| {
                let (s, c) = (t.omega * u).sin_cos();
                let w = t.omega.powi(order as i32);
                // d/du rotates (sin, cos) -> (cos, -sin)
                let v = match order % 4 {
                    0 => t.a * s + t.b * c,
                    1 => t.a * c - t.b * s,
                    2 => -t.a * s - t.b * c,
                    _ => -t.a * c + t.b * s,
                };
                v * w
            })
            .sum()
    }
}

impl Smooth for Harmonic {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
    fn value(&self, x: f64) -> f64 {
        self.scale * (self.raw(x, 0) - self.offset)
    }
    fn derivative(&self, x: f64) -> f64 {
        self.scale * self.raw(x, 1)
    }
    fn second_derivative(&self, x: f64) -> f64 {
        self.scale * self.raw(x, 2)
    }
}

/// Random trigonometric sum with an interior critical count in `target`,
/// shifted and scaled to take values in `[0, 1]`.
///
/// Each draw has 2 to 5 terms with coefficients uniform in `[-1, 1]` and
/// frequencies `2π k / width` for `k` uniform in `[2, 14]`; draws outside the
/// target count are rejected.
pub fn gen_harmonic(
    seed: u64,
    domain: (f64, f64),
    target: (usize, usize),
    samples_per_unit: f64,
) -> Result<SmoothCase> {
    check_domain(domain)?;
    if target.0 > target.1 {
        return Err(Error::InvalidConfig(format!("empty target range {target:?}")));
    }
    let (a, b) = domain;
    let width = b - a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ROUNDS {
        let count = rng.gen_range(2..=5);
        let terms: Vec<HarmonicTerm> = (0..count)
            .map(|_| HarmonicTerm {
                a: rng.gen_range(-1.0..1.0),
                b: rng.gen_range(-1.0..1.0),
                omega: TAU * rng.gen_range(2.0..14.0) / width,
            })
            .collect();
        let mut h = Harmonic { terms, offset: 0.0, scale: 1.0, domain };
        let roots = bisect_roots(|x| h.derivative(x), a, b, ROOT_CELLS);
        if roots.len() < target.0 || roots.len() > target.1 {
            continue;
        }
        // Extremes over the closed domain are at interior roots or endpoints.
        let ends = [a, b];
        let values = roots.iter().chain(&ends).map(|&x| h.value(x));
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !(hi > lo) {
            continue;
        }
        h.offset = lo;
        h.scale = 1.0 / (hi - lo);
        let truth = smooth_truth(&h, &roots);
        let samples = SampledFunction::from_fn_density(a, b, samples_per_unit, |x| h.value(x))?;
        return Ok(SmoothCase { model: SmoothModel::Harmonic(h), samples, truth });
    }
    Err(Error::GenerationExhausted(MAX_ROUNDS))
}
