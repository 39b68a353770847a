//! Timing and operation counts of the naive and rolling-ball PL
//! reconstructions on generated functions.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::gen_pl;
use crate::reconstruct_pl::{line_sets, naive_reconstruct, rolling_ball_reconstruct, Reconstruction, TripleConfig};

pub const TABLE_SIZES: [usize; 7] = [5, 10, 25, 50, 100, 150, 200];
pub const DEFAULT_REPETITIONS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub n: usize,
    pub naive_seconds: f64,
    pub optimized_seconds: f64,
    pub naive_count: u64,
    pub optimized_count: u64,
}

impl BenchResult {
    pub fn speedup(&self) -> f64 {
        self.naive_seconds / self.optimized_seconds
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

fn same_points(a: &Reconstruction, b: &Reconstruction, tol: f64) -> bool {
    a.points.len() == b.points.len() && a.points.iter().zip(&b.points).all(|(p, q)| p.dist(*q) < tol)
}

fn time_median(reps: usize, mut run: impl FnMut() -> Reconstruction) -> (f64, Reconstruction) {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let r = run();
        times.push(start.elapsed().as_secs_f64());
        last = Some(r);
    }
    (median(times), last.expect("at least one repetition"))
}

/// For each size, generates a PL function with that many interior critical
/// points (seeded by `seed + n`), computes the three default diagrams once,
/// checks both searches agree, and records median reconstruction times.
pub fn run_bench(sizes: &[usize], seed: u64, repetitions: usize) -> Result<Vec<BenchResult>> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidConfig("sizes must be nonempty and positive".into()));
    }
    if repetitions == 0 {
        return Err(Error::InvalidConfig("repetitions must be positive".into()));
    }
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let (f, _) = gen_pl(n, seed.wrapping_add(n as u64), (0.0, 1.0))?;
        let cfg = TripleConfig::with_defaults(f.start(), f.end())?;
        let (t, s, r) = line_sets(&f, &cfg);

        let (naive_seconds, naive) = time_median(repetitions, || naive_reconstruct(&t, &s, &r, &cfg));
        let (optimized_seconds, rolling) = time_median(repetitions, || rolling_ball_reconstruct(&t, &s, &r, &cfg));
        if !same_points(&naive, &rolling, cfg.match_tol) {
            return Err(Error::ReconstructionMismatch(n));
        }
        out.push(BenchResult {
            n,
            naive_seconds,
            optimized_seconds,
            naive_count: naive.ops.total(),
            optimized_count: rolling.ops.total(),
        });
    }
    Ok(out)
}

/// CSV with columns `n,naive_s,optimized_s,naive_count,optimized_count,speedup`
/// after a `#` comment line describing what was timed.
pub fn to_csv(results: &[BenchResult], repetitions: usize) -> String {
    let mut s = format!(
        "# reconstruction only, diagram computation excluded; median of {repetitions} repetitions\n\
         n,naive_s,optimized_s,naive_count,optimized_count,speedup\n"
    );
    for r in results {
        s.push_str(&format!(
            "{},{:.9},{:.9},{},{},{:.3}\n",
            r.n,
            r.naive_seconds,
            r.optimized_seconds,
            r.naive_count,
            r.optimized_count,
            r.speedup()
        ));
    }
    s
}
