//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{landscape_anchor_sequence, sweep_diagram, verdict};
use phtrecon::bench::{run_bench, TABLE_SIZES};
use phtrecon::generators::{gen_harmonic, gen_pl, gen_spline, GroundTruth, DEFAULT_KNOTS, HARMONIC_TARGET};
use phtrecon::landscape::{get_y_values, landscapes_from_pairs, landscapes_of_samples, reconstruct_from_landscapes};
use phtrecon::reconstruct_pl::{line_sets, rolling_ball_bound, triple_points_generic};
use phtrecon::reconstruct_smooth::{detect_triangles, locate_with_shallow, refine};
use phtrecon::sampling::DEFAULT_SAMPLES_PER_UNIT;
use phtrecon::{
    compute_x, five_line_reconstruct, is_admissible, naive_reconstruct, rolling_ball_reconstruct, sublevel_diagram,
    Angle, CriticalKind, CriticalPoint, Point2, SampledFunction, SmoothConfig, TripleConfig,
};

/// Coordinate tolerance for exact PL recovery.
const PL_TOL: f64 = 1e-6;
/// Merge tolerance when comparing the two PL searches.
const MERGE_TOL: f64 = 1e-6;
/// Extra additive slack allowed over the rolling-ball bound, per critical point.
const BOUND_SLACK_PER_N: f64 = 10.0;
const MIN_COUNT_RATIO: f64 = 20.0;
const MIN_SPEEDUP: f64 = 20.0;
/// Accepted band for the naive count ratio when n doubles.
const CUBIC_RATIO_BAND: (f64, f64) = (7.0, 9.0);
const ESTIMATOR_TOL: f64 = 1e-5;
const NONIC_POINT_TOL: f64 = 1e-3;
/// Agreement to four decimal places: off by less than half a unit in the
/// fourth place.
const FOUR_DIGITS: f64 = 5e-5;
const MIN_SMOOTH_RATE: f64 = 0.80;
const DECODE_TOL: f64 = 1e-9;
const LANDSCAPE_X_TOL: f64 = 1e-4;
const CONVERGENCE_TARGET: f64 = 1e-6;
const CONVERGENCE_ROUNDS: usize = 20;
/// At most this fraction of PL instances may be skipped as non-generic or
/// non-admissible.
const MAX_SKIP_RATE: f64 = 0.10;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn matches_pl_truth(found: &[Point2], truth: &GroundTruth) -> bool {
    found.len() == truth.critical_points.len()
        && found
            .iter()
            .zip(&truth.critical_points)
            .all(|(p, c)| (p.x - c.x).abs() < PL_TOL && (p.y - c.y).abs() < PL_TOL)
}

fn pl_round_trip() -> Outcome {
    let start = Instant::now();
    let (mut tested, mut skipped, mut recovered) = (0usize, 0usize, 0usize);
    for n in [5usize, 10, 25, 50] {
        for s in 0..100u64 {
            let (f, truth) = gen_pl(n, 1000 * n as u64 + s, (0.0, 1.0)).unwrap();
            let cfg = TripleConfig::with_defaults(f.start(), f.end()).unwrap();
            let (t, sl, r) = line_sets(&f, &cfg);
            let admissible = cfg.angles().iter().all(|&a| is_admissible(&f, a));
            if !admissible || !triple_points_generic(&t, &sl, &r, &cfg) {
                skipped += 1;
                continue;
            }
            tested += 1;
            let rec = rolling_ball_reconstruct(&t, &sl, &r, &cfg);
            if matches_pl_truth(rec.interior(), &truth) {
                recovered += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let total = tested + skipped;
    let ok = recovered == tested && (skipped as f64) <= MAX_SKIP_RATE * total as f64 && secs < 30.0;
    (ok, format!("{recovered}/{tested} recovered, {skipped} skipped, {secs:.1}s"))
}

fn naive_equivalence() -> Outcome {
    let mut same = 0;
    for i in 0..200u64 {
        let n = 1 + (i % 50) as usize;
        let (f, _) = gen_pl(n, 50_000 + i, (0.0, 1.0)).unwrap();
        let cfg = TripleConfig::with_defaults(f.start(), f.end()).unwrap();
        let (t, s, r) = line_sets(&f, &cfg);
        let a = naive_reconstruct(&t, &s, &r, &cfg);
        let b = rolling_ball_reconstruct(&t, &s, &r, &cfg);
        if a.points.len() == b.points.len() && a.points.iter().zip(&b.points).all(|(p, q)| p.dist(*q) < MERGE_TOL) {
            same += 1;
        }
    }
    (same == 200, format!("{same}/200 identical"))
}

fn complexity() -> Outcome {
    let res = match run_bench(&TABLE_SIZES, 1, 5) {
        Ok(r) => r,
        Err(e) => return (false, format!("bench failed: {e}")),
    };
    let within_bound =
        res.iter().all(|r| r.optimized_count as f64 <= rolling_ball_bound(r.n) + BOUND_SLACK_PER_N * r.n as f64);
    let by_n = |n: usize| res.iter().find(|r| r.n == n).unwrap();
    let big = by_n(200);
    let count_ratio = big.naive_count as f64 / big.optimized_count as f64;
    let speedup = big.speedup();
    let cubic: Vec<f64> =
        [(50, 100), (100, 200)].iter().map(|&(a, b)| by_n(b).naive_count as f64 / by_n(a).naive_count as f64).collect();
    let cubic_ok = cubic.iter().all(|&c| c >= CUBIC_RATIO_BAND.0 && c <= CUBIC_RATIO_BAND.1);
    let ok = within_bound && count_ratio >= MIN_COUNT_RATIO && speedup >= MIN_SPEEDUP && cubic_ok;
    (
        ok,
        format!(
            "bound {} at all n, count ratio {count_ratio:.0}x, speedup {speedup:.0}x at n=200, naive growth {:.2}/{:.2}",
            if within_bound { "held" } else { "violated" },
            cubic[0],
            cubic[1]
        ),
    )
}

fn diagram_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut agree = 0;
    for i in 0..500 {
        let n = rng.gen_range(2..=12);
        let mut x = 0.0;
        let ties = i % 4 == 0;
        let vertices: Vec<Point2> = (0..n)
            .map(|_| {
                x += rng.gen_range(0.1..1.0);
                let y = if ties { rng.gen_range(0..5) as f64 } else { rng.gen_range(-5.0..5.0) };
                Point2::new(x, y)
            })
            .collect();
        let dir = if ties {
            Angle::VERTICAL
        } else {
            Angle::from_radians(rng.gen_range(0.05..std::f64::consts::PI - 0.05)).unwrap()
        };
        let d = sublevel_diagram(&vertices, dir);
        let mut got: Vec<(f64, f64)> = d.finite_pairs().collect();
        got.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let (want, essential) = sweep_diagram(&vertices, dir);
        if got == want && d.essential_birth() == essential {
            agree += 1;
        }
    }
    (agree == 500, format!("{agree}/500 diagrams match the sweep oracle"))
}

fn nonic(x: f64) -> f64 {
    x.powi(9) - x.powi(4) + x.powi(3) - x + 1.0
}

fn estimator_check() -> Outcome {
    let x = compute_x(0.570083, 0.806887, 0.722979, 0.787817, 1.0, 0.5).unwrap();
    let est_ok = (x - 0.766012).abs() < ESTIMATOR_TOL;
    let f = SampledFunction::from_fn_density(0.54, 0.88, DEFAULT_SAMPLES_PER_UNIT, nonic).unwrap();
    let rec = five_line_reconstruct(&f, &SmoothConfig::default()).unwrap();
    let located = rec.critical_points.iter().find(|p| (p.x - 0.762580).abs() < NONIC_POINT_TOL);
    let ok = est_ok && rec.critical_points.len() == 1 && located.is_some();
    (
        ok,
        format!(
            "estimator {x:.6}, five-line found {:?} of {} point(s)",
            located.map(|p| (p.x * 1e6).round() / 1e6),
            rec.critical_points.len()
        ),
    )
}

fn fully_recovered(found: &[CriticalPoint], truth: &GroundTruth) -> bool {
    found.len() == truth.critical_points.len()
        && found.iter().zip(&truth.critical_points).all(|(p, c)| (p.x - c.x).abs() < FOUR_DIGITS && p.kind == c.kind)
}

fn smooth_experiment() -> Outcome {
    let start = Instant::now();
    let cfg = SmoothConfig::default();
    let mut harmonic = 0;
    let mut spline = 0;
    for seed in 0..100u64 {
        let c = gen_harmonic(seed, (0.0, 1.0), HARMONIC_TARGET, DEFAULT_SAMPLES_PER_UNIT).unwrap();
        let rec = five_line_reconstruct(&c.samples, &cfg).unwrap();
        if fully_recovered(&rec.critical_points, &c.truth) {
            harmonic += 1;
        }
        let c = gen_spline(seed, (0.0, 1.0), DEFAULT_KNOTS, DEFAULT_SAMPLES_PER_UNIT).unwrap();
        let rec = five_line_reconstruct(&c.samples, &cfg).unwrap();
        if fully_recovered(&rec.critical_points, &c.truth) {
            spline += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = harmonic as f64 >= 100.0 * MIN_SMOOTH_RATE && spline as f64 >= 100.0 * MIN_SMOOTH_RATE && secs < 300.0;
    (ok, format!("harmonic {harmonic}%, spline {spline}% fully recovered, {secs:.1}s"))
}

fn landscape_round_trip() -> Outcome {
    // Decoding against the brute-force anchor oracle, level by level.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut decoded_ok = 0;
    for _ in 0..200 {
        let count = rng.gen_range(1..=10);
        let pairs: Vec<(f64, f64)> = (0..count)
            .map(|_| {
                let b: f64 = rng.gen_range(0.0..10.0);
                (b, b + rng.gen_range(0.1..5.0))
            })
            .collect();
        let ls = landscapes_from_pairs(&pairs, count);
        let mut all = Vec::new();
        let mut levels_ok = true;
        for l in &ls {
            let Ok(ys) = get_y_values(l) else {
                levels_ok = false;
                break;
            };
            let want = landscape_anchor_sequence(&pairs, l.level);
            levels_ok &= ys.len() == want.len() && ys.iter().zip(&want).all(|(a, b)| (a - b).abs() < DECODE_TOL);
            all.extend(ys);
        }
        // Every birth and death appears, and nothing else does.
        let mut expected: Vec<f64> = pairs.iter().flat_map(|&(b, d)| [b, d]).collect();
        expected.sort_by(f64::total_cmp);
        all.sort_by(f64::total_cmp);
        all.dedup_by(|a, b| (*a - *b).abs() < DECODE_TOL);
        let values_ok =
            all.len() == expected.len() && all.iter().zip(&expected).all(|(a, b)| (a - b).abs() < DECODE_TOL);
        if levels_ok && values_ok {
            decoded_ok += 1;
        }
    }

    // Critical points of sampled PL functions from all landscape levels.
    let mut misses = 0;
    let mut extras = 0;
    for s in 0..100u64 {
        let n = 3 + (s % 10) as usize;
        let (f, truth) = gen_pl(n, 70_000 + s, (0.0, 1.0)).unwrap();
        let samples = SampledFunction::from_pl(&f, 1e5).unwrap();
        let ls = landscapes_of_samples(&samples, n + 2);
        let found = reconstruct_from_landscapes(&ls, &samples).unwrap();
        let interior: Vec<&CriticalPoint> = found.iter().filter(|p| p.kind != CriticalKind::Endpoint).collect();
        for c in &truth.critical_points {
            if !interior.iter().any(|p| (p.x - c.x).abs() < LANDSCAPE_X_TOL && p.kind == c.kind) {
                misses += 1;
            }
        }
        extras += interior.len().saturating_sub(truth.critical_points.len());
    }
    let ok = decoded_ok == 200 && misses == 0;
    (ok, format!("{decoded_ok}/200 diagrams decoded exactly, {misses} missed and {extras} extra critical points"))
}

/// Slope-`m` tangent height of `g` near 0 by bisection on `g' = m`.
fn analytic_tangent(g: impl Fn(f64) -> f64, gp: impl Fn(f64) -> f64, m: f64) -> f64 {
    let (mut lo, mut hi) = (-0.4, 0.55);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gp(mid) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Angle::from_orthogonal_slope(m).unwrap().project(Point2::new(x, g(x)))
}

fn strictly_shrinks(errors: &[f64]) -> Option<usize> {
    let first = errors.iter().position(|&e| e < CONVERGENCE_TARGET)?;
    errors[..=first].windows(2).all(|w| w[1] < w[0]).then_some(first + 1)
}

fn convergence() -> Outcome {
    let g = |x: f64| x * x * (1.0 + 0.3 * x.sin());
    let gp = |x: f64| 2.0 * x * (1.0 + 0.3 * x.sin()) + 0.3 * x * x * x.cos();
    // The steep base at 30° is about 0.29 here, so tau must exceed it.
    let cfg = SmoothConfig { tau: 0.5, ..SmoothConfig::default() };

    // Exact tangent lines.
    let m1 = cfg.steep_slope();
    let tri = detect_triangles(&[0.0], &[analytic_tangent(g, gp, m1)], &[analytic_tangent(g, gp, -m1)], m1, cfg.tau);
    let mut exact = Vec::new();
    let mut shallow = cfg.steep_deg;
    for _ in 0..CONVERGENCE_ROUNDS {
        shallow /= 2.0;
        let m2 = shallow.to_radians().tan();
        let rr = [analytic_tangent(g, gp, -m2)];
        let ss = [analytic_tangent(g, gp, m2)];
        let pts = locate_with_shallow(&tri, &rr, &ss, m1, m2, (-0.4, 0.55));
        exact.push(pts.first().map_or(f64::INFINITY, |p| p.x.abs()));
    }

    // Tangent lines from a sampled grid with spacing 1e-5.
    let f = SampledFunction::from_fn(-0.4, 0.55, 95_001, g).unwrap();
    let sampled: Vec<f64> = refine(&f, &cfg, CONVERGENCE_ROUNDS)
        .unwrap()
        .iter()
        .map(|r| r.first().map_or(f64::INFINITY, |p| p.x.abs()))
        .collect();

    let a = strictly_shrinks(&exact);
    let b = strictly_shrinks(&sampled);
    let ok = a.is_some() && b.is_some();
    (ok, format!("below {CONVERGENCE_TARGET:e} after {a:?} rounds (exact tangents), {b:?} rounds (sampled)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 PL round trip", pl_round_trip),
        ("2 naive/rolling-ball equivalence", naive_equivalence),
        ("3 complexity bound and speedup", complexity),
        ("4 diagram oracle", diagram_oracle),
        ("5 estimator and nonic point", estimator_check),
        ("6 smooth experiment", smooth_experiment),
        ("7 landscape round trip", landscape_round_trip),
        ("8 refinement convergence", convergence),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let (ok, detail) = run();
        println!("{} [{name}] {detail}", verdict(ok));
        if !ok {
            failed += 1;
        }
    }
    println!("acceptance: {}/8 passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
