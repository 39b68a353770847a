//! Brute-force oracles shared by integration tests. None of these call into
//! the library's persistence or landscape code.

#![allow(dead_code)]

use phtrecon::{Angle, Point2};

/// Diagram of a polyline by sweeping every distinct height and tracking the
/// maximal runs of consecutive vertices at or below it. Returns sorted
/// finite `(birth, death)` pairs with positive persistence and the essential
/// birth.
pub fn sweep_diagram(vertices: &[Point2], dir: Angle) -> (Vec<(f64, f64)>, f64) {
    let h: Vec<f64> = vertices.iter().map(|&p| dir.project(p)).collect();
    let mut levels = h.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // Runs alive after the previous level: (first index, last index, birth).
    let mut alive: Vec<(usize, usize, f64)> = Vec::new();
    let mut pairs = Vec::new();
    for &c in &levels {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < h.len() {
            if h[i] <= c {
                let start = i;
                while i + 1 < h.len() && h[i + 1] <= c {
                    i += 1;
                }
                runs.push((start, i));
            }
            i += 1;
        }
        let mut next = Vec::with_capacity(runs.len());
        for (lo, hi) in runs {
            let mut inside: Vec<f64> =
                alive.iter().filter(|&&(a, b, _)| a >= lo && b <= hi).map(|&(_, _, birth)| birth).collect();
            let birth = if inside.is_empty() {
                c
            } else {
                inside.sort_by(f64::total_cmp);
                // The oldest survives; every other merged component dies here.
                for &b in &inside[1..] {
                    if b < c {
                        pairs.push((b, c));
                    }
                }
                inside[0]
            };
            next.push((lo, hi, birth));
        }
        alive = next;
    }
    assert_eq!(alive.len(), 1, "a path is connected at its top level");
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    (pairs, alive[0].2)
}

fn tent(b: f64, d: f64, t: f64) -> f64 {
    (t - b).min(d - t).max(0.0)
}

/// Expected decoded values of landscape level `k` (1-based): split the line
/// at every point where two tent sides could cross, find which tent side
/// realises the k-th largest value in each piece, and read off its anchor
/// (the birth for a rising side, the death for a falling one). Consecutive
/// pieces on the same line contribute one anchor.
pub fn landscape_anchor_sequence(pairs: &[(f64, f64)], k: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = Vec::new();
    for &(b, d) in pairs {
        cuts.push(b);
        cuts.push(d);
        for &(b2, d2) in pairs {
            cuts.push(0.5 * (b + d2));
            cuts.push(0.5 * (b2 + d));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut seq: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, bool)> = None;
    for w in cuts.windows(2) {
        if w[1] - w[0] < 1e-12 {
            continue;
        }
        let t = 0.5 * (w[0] + w[1]);
        let mut vals: Vec<(f64, usize)> = pairs.iter().enumerate().map(|(i, &(b, d))| (tent(b, d, t), i)).collect();
        vals.sort_by(|a, b| b.0.total_cmp(&a.0));
        let side = vals.get(k - 1).filter(|v| v.0 > 0.0).map(|&(_, i)| {
            let (b, d) = pairs[i];
            if t - b < d - t {
                (b, true)
            } else {
                (d, false)
            }
        });
        if let Some(sd) = side {
            if prev != Some(sd) {
                seq.push(sd.0);
            }
        }
        prev = side;
    }
    seq
}

/// Distance from each target to the nearest candidate; `None` if no
/// candidate is within `tol`.
pub fn nearest_within(candidates: &[f64], target: f64, tol: f64) -> Option<f64> {
    candidates.iter().map(|&c| (c - target).abs()).filter(|&d| d < tol).reduce(f64::min)
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
