use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_domain, GroundTruth};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::persistence::{CriticalKind, CriticalPoint, PLFunction};

/// Smallest allowed gap between any two vertex values, relative to the range.
const DISTINCT_RTOL: f64 = 1e-6;

/// Random zigzag with exactly `n` interior extrema.
///
/// Vertex spacings are uniform in `[0.5, 1.5]` before normalising to the
/// domain. Values follow an alternating walk with step sizes uniform in
/// `[0.3, 1.0]` times the domain width, so consecutive critical values differ
/// by well over 1% of the range and every segment is steeper than 0.4.
pub fn gen_pl(n: usize, seed: u64, domain: (f64, f64)) -> Result<(PLFunction, GroundTruth)> {
    check_domain(domain)?;
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    let (a, b) = domain;
    let width = b - a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let gaps: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.5..1.5)).collect();
        let total: f64 = gaps.iter().sum();
        let mut xs = Vec::with_capacity(n + 2);
        let mut acc = 0.0;
        xs.push(a);
        for g in &gaps[..n] {
            acc += g;
            xs.push(a + width * acc / total);
        }
        xs.push(b);

        let mut up: bool = rng.gen();
        let mut ys = Vec::with_capacity(n + 2);
        let mut y = 0.0;
        ys.push(y);
        for _ in 0..=n {
            let step = rng.gen_range(0.3..1.0) * width;
            y += if up { step } else { -step };
            ys.push(y);
            up = !up;
        }

        let mut sorted = ys.clone();
        sorted.sort_by(f64::total_cmp);
        let range = sorted[sorted.len() - 1] - sorted[0];
        if sorted.windows(2).any(|w| w[1] - w[0] < DISTINCT_RTOL * range) {
            continue;
        }

        let vertices: Vec<Point2> = xs.iter().zip(&ys).map(|(&x, &y)| Point2::new(x, y)).collect();
        let critical_points = (1..=n)
            .map(|i| {
                let kind = if ys[i] > ys[i - 1] { CriticalKind::LocalMax } else { CriticalKind::LocalMin };
                CriticalPoint::new(xs[i], ys[i], kind)
            })
            .collect();
        let truth = GroundTruth { start: vertices[0], end: vertices[n + 1], critical_points };
        return Ok((PLFunction::new(vertices)?, truth));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{critical_points, min_abs_slope};
    use proptest::prelude::*;

    #[test]
    fn five_interior_points() {
        let (f, t) = gen_pl(5, 42, (0.0, 1.0)).unwrap();
        let interior = critical_points(&f).into_iter().filter(|c| c.kind != CriticalKind::Endpoint).count();
        assert_eq!(interior, 5);
        assert_eq!(t.critical_points.len(), 5);
    }

    #[test]
    fn single_extremum() {
        let (f, t) = gen_pl(1, 0, (0.0, 1.0)).unwrap();
        assert_eq!(f.vertices().len(), 3);
        assert_eq!(t.critical_points.len(), 1);
    }

    #[test]
    fn deterministic() {
        assert_eq!(gen_pl(25, 9, (0.0, 1.0)).unwrap(), gen_pl(25, 9, (0.0, 1.0)).unwrap());
        assert_ne!(gen_pl(25, 9, (0.0, 1.0)).unwrap().0, gen_pl(25, 10, (0.0, 1.0)).unwrap().0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gen_pl(0, 0, (0.0, 1.0)).is_err());
        assert!(gen_pl(3, 0, (1.0, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn invariants(n in 1usize..80, seed in any::<u64>(), a in -10.0f64..10.0, w in 0.1f64..50.0) {
            let (f, t) = gen_pl(n, seed, (a, a + w)).unwrap();
            let found: Vec<CriticalPoint> = critical_points(&f)
                .into_iter()
                .filter(|c| c.kind != CriticalKind::Endpoint)
                .collect();
            prop_assert_eq!(&found, &t.critical_points);
            prop_assert!(min_abs_slope(&f) > 0.4);
            for w in t.critical_points.windows(2) {
                prop_assert!(w[0].x < w[1].x);
                prop_assert!(w[0].kind != w[1].kind);
            }
            let ys: Vec<f64> = f.vertices().iter().map(|p| p.y).collect();
            let range = f.max_value() - ys.iter().copied().fold(f64::INFINITY, f64::min);
            for w in ys.windows(2) {
                prop_assert!((w[1] - w[0]).abs() >= 0.01 * range);
            }
        }
    }
}
