//! Exact persistence landscapes and their decoding back to critical points
//! of the source function.
//!
//! A landscape level is stored as its breakpoints `(t, u)`; every segment has
//! slope -1, 0 or +1. Decoding walks the breakpoints: a take-off vertex sits
//! at a birth, and each local extremum of the landscape at `t` pairs with the
//! previously decoded value `y` to give the next one as `2t - y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::persistence::{sublevel_diagram, CriticalKind, CriticalPoint, Diagram};
use crate::sampling::SampledFunction;

/// Sample match threshold on the squared difference `(f_i - y)^2`.
pub const Y_MATCH_THRESHOLD: f64 = 1e-4;

/// One level `λ_k` of a landscape. An empty vertex list is the zero function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landscape {
    pub level: usize,
    pub vertices: Vec<(f64, f64)>,
}

impl Landscape {
    pub fn is_zero(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Value at `t` by linear interpolation; zero outside the support.
    pub fn eval(&self, t: f64) -> f64 {
        let v = &self.vertices;
        if v.is_empty() || t <= v[0].0 || t >= v[v.len() - 1].0 {
            return 0.0;
        }
        let i = v.partition_point(|p| p.0 <= t);
        let ((t0, u0), (t1, u1)) = (v[i - 1], v[i]);
        u0 + (u1 - u0) * (t - t0) / (t1 - t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    TakeOff,
    Landing,
    LocalMax,
    LocalMin,
}

/// The tent `max(0, min(t - beta, delta - t))`.
#[inline]
pub fn tent(beta: f64, delta: f64, t: f64) -> f64 {
    (t - beta).min(delta - t).max(0.0)
}

/// k-th largest tent value at `t` (1-based), zero when there are fewer than
/// `k` positive tents.
pub fn kmax(pairs: &[(f64, f64)], k: usize, t: f64) -> f64 {
    let mut vals: Vec<f64> = pairs.iter().map(|&(b, d)| tent(b, d, t)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.get(k - 1).copied().unwrap_or(0.0)
}

/// Exact landscapes `λ_1..λ_max_k` of the given finite bars.
///
/// Breakpoints of every level lie in `{β_i} ∪ {δ_i} ∪ {(β_i + δ_j)/2}`, and
/// between consecutive candidates all tents are linear and keep their order,
/// so evaluating `kmax` at the candidates and dropping collinear vertices
/// gives the exact piecewise-linear representation.
pub fn landscapes_from_pairs(pairs: &[(f64, f64)], max_k: usize) -> Vec<Landscape> {
    let pairs: Vec<(f64, f64)> = pairs.iter().copied().filter(|&(b, d)| b < d).collect();
    let mut cands: Vec<f64> = Vec::with_capacity(pairs.len() * (pairs.len() + 2));
    for &(b, d) in &pairs {
        cands.push(b);
        cands.push(d);
        for &(_, d2) in &pairs {
            if b < d2 {
                cands.push(0.5 * (b + d2));
            }
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();

    // values[c][k-1] = λ_k(cands[c])
    let values: Vec<Vec<f64>> = cands
        .iter()
        .map(|&t| {
            let mut vals: Vec<f64> = pairs.iter().map(|&(b, d)| tent(b, d, t)).collect();
            vals.sort_by(|a, b| b.total_cmp(a));
            vals.truncate(max_k);
            vals
        })
        .collect();

    (1..=max_k)
        .map(|k| {
            let raw: Vec<(f64, f64)> =
                cands.iter().zip(&values).map(|(&t, vals)| (t, vals.get(k - 1).copied().unwrap_or(0.0))).collect();
            Landscape { level: k, vertices: simplify(&raw) }
        })
        .collect()
}

/// Landscapes of a diagram, with the essential bar closed at `essential_cap`.
pub fn landscapes(d: &Diagram, max_k: usize, essential_cap: f64) -> Vec<Landscape> {
    let mut pairs: Vec<(f64, f64)> = d.finite_pairs().collect();
    pairs.push((d.essential_birth(), essential_cap));
    landscapes_from_pairs(&pairs, max_k)
}

/// Vertical-direction landscapes of sampled data, essential bar capped at the
/// maximum sample value.
pub fn landscapes_of_samples(f: &SampledFunction, max_k: usize) -> Vec<Landscape> {
    let d = sublevel_diagram(&f.points(), Angle::VERTICAL);
    landscapes(&d, max_k, f.max_value())
}

/// Index of the last level that is not identically zero, plus one.
pub fn nonzero_levels(ls: &[Landscape]) -> usize {
    ls.iter().rposition(|l| !l.is_zero()).map_or(0, |i| i + 1)
}

/// Segment direction: -1, 0 or +1. Slopes are exactly one of these, so half
/// the run is a safe threshold.
fn direction(a: (f64, f64), b: (f64, f64)) -> i8 {
    let du = b.1 - a.1;
    let half = 0.5 * (b.0 - a.0);
    if du > half {
        1
    } else if du < -half {
        -1
    } else {
        0
    }
}

/// Trims zero padding and removes collinear vertices.
fn simplify(raw: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (Some(first), Some(last)) = (raw.iter().position(|p| p.1 > 0.0), raw.iter().rposition(|p| p.1 > 0.0)) else {
        return Vec::new();
    };
    let trimmed = &raw[first.saturating_sub(1)..=(last + 1).min(raw.len() - 1)];
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(trimmed.len());
    for &p in trimmed {
        while out.len() >= 2 {
            let n = out.len();
            if direction(out[n - 2], out[n - 1]) == direction(out[n - 1], p) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Classifies breakpoint `index` of a nonzero landscape.
///
/// A zero vertex with positive values on both sides, where two bars touch,
/// decodes like a local minimum and is reported as one.
pub fn classify_vertex(l: &Landscape, index: usize) -> Result<VertexKind> {
    let v = &l.vertices;
    let Some(&(_, u)) = v.get(index) else {
        return Err(Error::DegenerateVertex(index));
    };
    let left = index.checked_sub(1).map(|i| v[i]);
    let right = v.get(index + 1).copied();
    if u == 0.0 {
        let left_up = left.is_some_and(|p| p.1 > 0.0);
        let right_up = right.is_some_and(|p| p.1 > 0.0);
        return match (left_up, right_up) {
            (false, true) => Ok(VertexKind::TakeOff),
            (true, false) => Ok(VertexKind::Landing),
            (true, true) => Ok(VertexKind::LocalMin),
            (false, false) => Err(Error::DegenerateVertex(index)),
        };
    }
    match (left, right) {
        (Some(a), Some(b)) => match (direction(a, v[index]), direction(v[index], b)) {
            (1, -1) => Ok(VertexKind::LocalMax),
            (-1, 1) => Ok(VertexKind::LocalMin),
            _ => Err(Error::DegenerateVertex(index)),
        },
        _ => Err(Error::DegenerateVertex(index)),
    }
}

/// y-values of critical points encoded by one landscape level.
///
/// Take-offs contribute their `t`; each local extremum contributes
/// `2(t - y_prev/2)` where `y_prev` is the previous output; landings are
/// skipped because they repeat the preceding value.
pub fn get_y_values(l: &Landscape) -> Result<Vec<f64>> {
    let mut ys: Vec<f64> = Vec::new();
    for (i, &(t, _)) in l.vertices.iter().enumerate() {
        match classify_vertex(l, i)? {
            VertexKind::TakeOff => ys.push(t),
            VertexKind::Landing => {}
            VertexKind::LocalMax | VertexKind::LocalMin => {
                let prev = *ys.last().ok_or(Error::DegenerateVertex(i))?;
                ys.push(2.0 * (t - 0.5 * prev));
            }
        }
    }
    Ok(ys)
}

/// A local extremum of a sample sequence, with equal neighbours collapsed.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SampleExtremum {
    x: f64,
    y: f64,
    kind: CriticalKind,
}

/// Extremum classification of the plateau containing `i`, reported at the
/// plateau midpoint. Endpoints count only as one-sided minima, the only kind
/// of endpoint that shows up in a sublevel diagram.
fn sample_extremum(ys: &[f64], xs: &[f64], i: usize) -> Option<SampleExtremum> {
    let n = ys.len();
    let (mut lo, mut hi) = (i, i);
    while lo > 0 && ys[lo - 1] == ys[i] {
        lo -= 1;
    }
    while hi + 1 < n && ys[hi + 1] == ys[i] {
        hi += 1;
    }
    let left = lo.checked_sub(1).map(|j| ys[j]);
    let right = (hi + 1 < n).then(|| ys[hi + 1]);
    let y = ys[i];
    let kind = match (left, right) {
        (Some(l), Some(r)) if l > y && r > y => CriticalKind::LocalMin,
        (Some(l), Some(r)) if l < y && r < y => CriticalKind::LocalMax,
        (None, Some(r)) if r > y => CriticalKind::Endpoint,
        (Some(l), None) if l > y => CriticalKind::Endpoint,
        _ => return None,
    };
    Some(SampleExtremum { x: 0.5 * (xs[lo] + xs[hi]), y, kind })
}

fn matching_extrema(y_values: &[f64], ys: &[f64], xs: &[f64]) -> Vec<SampleExtremum> {
    let mut out: Vec<SampleExtremum> = Vec::new();
    for (i, &fi) in ys.iter().enumerate() {
        if y_values.iter().any(|&y| (fi - y) * (fi - y) < Y_MATCH_THRESHOLD) {
            if let Some(e) = sample_extremum(ys, xs, i) {
                out.push(e);
            }
        }
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    out.dedup_by(|a, b| a.x == b.x);
    out
}

/// x-coordinates of sample extrema whose value matches one of `y_values`.
pub fn get_x_values(y_values: &[f64], ys: &[f64], xs: &[f64]) -> Vec<f64> {
    matching_extrema(y_values, ys, xs).into_iter().map(|e| e.x).collect()
}

/// Critical points of `f` associated with the selected landscape levels.
pub fn reconstruct_from_landscapes(selected: &[Landscape], f: &SampledFunction) -> Result<Vec<CriticalPoint>> {
    let mut out: Vec<CriticalPoint> = Vec::new();
    for l in selected.iter().filter(|l| !l.is_zero()) {
        let ys = get_y_values(l)?;
        out.extend(matching_extrema(&ys, f.ys(), f.xs()).into_iter().map(|e| CriticalPoint::new(e.x, e.y, e.kind)));
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    out.dedup_by(|a, b| a.x == b.x);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::persistence::{directional_diagram, PLFunction};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn lv(v: &[(f64, f64)]) -> Landscape {
        Landscape { level: 1, vertices: v.to_vec() }
    }

    fn three_piece() -> PLFunction {
        PLFunction::new(vec![
            Point2::new(0.0, 2.5),
            Point2::new(0.5, 4.0),
            Point2::new(2.0, 0.5),
            Point2::new(4.0, 2.5),
        ])
        .unwrap()
    }

    fn three_piece_samples() -> SampledFunction {
        SampledFunction::from_fn(0.0, 4.0, 401, |x| three_piece().eval(x)).unwrap()
    }

    #[test]
    fn tent_values() {
        assert_eq!(tent(1.0, 5.0, 3.0), 2.0);
        assert_eq!(tent(1.0, 5.0, 0.0), 0.0);
        assert_eq!(tent(1.0, 5.0, 4.5), 0.5);
    }

    #[test]
    fn nested_bars() {
        let ls = landscapes_from_pairs(&[(1.0, 5.0), (2.0, 4.0)], 3);
        assert_eq!(ls[0].vertices, vec![(1.0, 0.0), (3.0, 2.0), (5.0, 0.0)]);
        assert_eq!(ls[1].vertices, vec![(2.0, 0.0), (3.0, 1.0), (4.0, 0.0)]);
        assert!(ls[2].is_zero());
    }

    #[test]
    fn crossing_bars() {
        let ls = landscapes_from_pairs(&[(0.0, 6.0), (3.0, 10.0)], 2);
        assert_eq!(ls[0].vertices, vec![(0.0, 0.0), (3.0, 3.0), (4.5, 1.5), (6.5, 3.5), (10.0, 0.0)]);
        assert_eq!(ls[1].vertices, vec![(3.0, 0.0), (4.5, 1.5), (6.0, 0.0)]);
    }

    #[test]
    fn single_bar() {
        let ls = landscapes_from_pairs(&[(0.0, 2.0)], 2);
        assert_eq!(ls[0].vertices, vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert!(ls[1].is_zero());
    }

    #[test]
    fn disjoint_bars_keep_zero_gap() {
        let ls = landscapes_from_pairs(&[(1.0, 2.0), (5.0, 6.0)], 1);
        assert_eq!(ls[0].vertices, vec![(1.0, 0.0), (1.5, 0.5), (2.0, 0.0), (5.0, 0.0), (5.5, 0.5), (6.0, 0.0)]);
        assert_eq!(get_y_values(&ls[0]).unwrap(), vec![1.0, 2.0, 5.0, 6.0]);
    }

    #[test]
    fn touching_bars_decode_through_zero_minimum() {
        let ls = landscapes_from_pairs(&[(0.0, 2.0), (2.0, 4.0)], 1);
        assert_eq!(classify_vertex(&ls[0], 2).unwrap(), VertexKind::LocalMin);
        assert_eq!(get_y_values(&ls[0]).unwrap(), vec![0.0, 2.0, 2.0, 4.0]);
    }

    #[test]
    fn classify_examples() {
        let l = &landscapes_from_pairs(&[(1.0, 5.0)], 1)[0];
        assert_eq!(classify_vertex(l, 0).unwrap(), VertexKind::TakeOff);
        assert_eq!(classify_vertex(l, 2).unwrap(), VertexKind::Landing);
        assert_eq!(classify_vertex(l, 1).unwrap(), VertexKind::LocalMax);
        let l = &landscapes_from_pairs(&[(0.0, 6.0), (3.0, 10.0)], 1)[0];
        assert_eq!(classify_vertex(l, 2).unwrap(), VertexKind::LocalMin);
        assert!(matches!(classify_vertex(l, 9), Err(Error::DegenerateVertex(9))));
    }

    #[test]
    fn classify_isolated_zero_is_degenerate() {
        let l = lv(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(matches!(classify_vertex(&l, 1), Err(Error::DegenerateVertex(1))));
    }

    #[test]
    fn y_values_examples() {
        assert_eq!(get_y_values(&lv(&[(1.0, 0.0), (3.0, 2.0), (5.0, 0.0)])).unwrap(), vec![1.0, 5.0]);
        assert_eq!(
            get_y_values(&lv(&[(0.0, 0.0), (3.0, 3.0), (4.5, 1.5), (6.5, 3.5), (10.0, 0.0)])).unwrap(),
            vec![0.0, 6.0, 3.0, 10.0]
        );
        assert_eq!(get_y_values(&lv(&[(2.0, 0.0), (3.0, 1.0), (4.0, 0.0)])).unwrap(), vec![2.0, 4.0]);
    }

    #[test]
    fn x_values_on_three_piece_grid() {
        let s = three_piece_samples();
        assert_eq!(get_x_values(&[4.0], s.ys(), s.xs()), vec![0.5]);
        assert_eq!(get_x_values(&[0.5], s.ys(), s.xs()), vec![2.0]);
        assert!(get_x_values(&[99.0], s.ys(), s.xs()).is_empty());
    }

    #[test]
    fn x_values_collapse_plateau() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let ys = [1.0, 0.0, 0.0, 1.0, 2.0];
        assert_eq!(get_x_values(&[0.0], &ys, &xs), vec![1.5]);
    }

    #[test]
    fn full_reconstruction_three_piece() {
        let s = three_piece_samples();
        let d = directional_diagram(&three_piece(), Angle::VERTICAL);
        let ls = landscapes(&d, 5, three_piece().max_value());
        let k = nonzero_levels(&ls);
        assert_eq!(k, 2);
        let cps = reconstruct_from_landscapes(&ls[..k], &s).unwrap();
        let got: Vec<(f64, f64, CriticalKind)> = cps.iter().map(|c| (c.x, c.y, c.kind)).collect();
        assert_eq!(
            got,
            vec![
                (0.0, 2.5, CriticalKind::Endpoint),
                (0.5, 4.0, CriticalKind::LocalMax),
                (2.0, 0.5, CriticalKind::LocalMin),
            ]
        );
    }

    #[test]
    fn empty_selection() {
        assert!(reconstruct_from_landscapes(&[], &three_piece_samples()).unwrap().is_empty());
    }

    #[test]
    fn first_level_decodes_deepest_component() {
        let s = three_piece_samples();
        let d = directional_diagram(&three_piece(), Angle::VERTICAL);
        let ls = landscapes(&d, 1, three_piece().max_value());
        let cps = reconstruct_from_landscapes(&ls, &s).unwrap();
        assert!(cps.iter().any(|c| c.x == 2.0 && c.y == 0.5));
    }

    #[test]
    fn json_shape() {
        let l = lv(&[(1.0, 0.0), (3.0, 2.0), (5.0, 0.0)]);
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"level":1,"vertices":[[1.0,0.0],[3.0,2.0],[5.0,0.0]]}"#);
    }

    fn arb_pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-5.0f64..5.0, 0.01f64..6.0), 1..=6)
            .prop_map(|v| v.into_iter().map(|(b, len)| (b, b + len)).collect())
    }

    proptest! {
        #[test]
        fn exact_matches_brute_force(pairs in arb_pairs(), ts in prop::collection::vec(-6.0f64..12.0, 50)) {
            let ls = landscapes_from_pairs(&pairs, pairs.len() + 1);
            for &t in &ts {
                for l in &ls {
                    let want = kmax(&pairs, l.level, t);
                    prop_assert!((l.eval(t) - want).abs() < 1e-9, "level {} t {t}", l.level);
                }
            }
            prop_assert!(ls[pairs.len()].is_zero());
        }

        #[test]
        fn levels_are_monotone(pairs in arb_pairs(), ts in prop::collection::vec(-6.0f64..12.0, 50)) {
            let ls = landscapes_from_pairs(&pairs, pairs.len());
            for &t in &ts {
                for w in ls.windows(2) {
                    prop_assert!(w[0].eval(t) + 1e-12 >= w[1].eval(t));
                }
            }
        }

        #[test]
        fn shape_invariants(pairs in arb_pairs()) {
            for l in landscapes_from_pairs(&pairs, pairs.len()) {
                if l.is_zero() { continue; }
                let v = &l.vertices;
                prop_assert_eq!(v[0].1, 0.0);
                prop_assert_eq!(v[v.len() - 1].1, 0.0);
                for w in v.windows(2) {
                    prop_assert!(w[0].1 >= 0.0);
                    let s = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                    prop_assert!((s.abs() - 1.0).abs() < 1e-9 || s.abs() < 1e-9, "slope {s}");
                }
            }
        }

        #[test]
        fn decoded_values_are_diagram_values(pairs in arb_pairs()) {
            let ends: Vec<f64> = pairs.iter().flat_map(|&(b, d)| [b, d]).collect();
            for l in landscapes_from_pairs(&pairs, pairs.len()) {
                if l.is_zero() { continue; }
                for y in get_y_values(&l).unwrap() {
                    prop_assert!(ends.iter().any(|&e| (e - y).abs() < 1e-9), "{y} not in {ends:?}");
                }
            }
        }
    }

    #[test]
    fn eval_interpolates() {
        let l = lv(&[(1.0, 0.0), (3.0, 2.0), (5.0, 0.0)]);
        assert_abs_diff_eq!(l.eval(2.0), 1.0);
        assert_eq!(l.eval(0.0), 0.0);
        assert_eq!(l.eval(6.0), 0.0);
    }
}
