#![allow(dead_code)]

use docit2_core::fuzzy::PiecewiseMF;
use docit2_core::it2::IT2MF;
use proptest::prelude::*;

/// Interior levels, core position and width, and outward steps per level.
/// Every step is at least half the level gap, so slopes stay at most 2.
pub fn t1_in(lo: f64, span: f64) -> impl Strategy<Value = PiecewiseMF> {
    (
        prop::collection::btree_set(1u32..99, 0..=3),
        0.0..1.0f64,
        0.0..0.2f64,
        prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 5),
    )
        .prop_map(move |(inner, pos, width, steps)| build(lo, span, &inner, pos, width, &steps))
}

pub fn t1() -> impl Strategy<Value = PiecewiseMF> {
    t1_in(0.0, 1.0)
}

fn build(lo: f64, span: f64, inner: &std::collections::BTreeSet<u32>, pos: f64, width: f64, steps: &[(f64, f64)]) -> PiecewiseMF {
    let mut levels: Vec<f64> = vec![1.0];
    levels.extend(inner.iter().rev().map(|&k| k as f64 / 100.0));
    levels.push(0.0);
    // shape in unit coordinates: core then outward steps, rescaled to fit
    let mut l = pos;
    let mut h = pos + width;
    let mut cuts = vec![(1.0, l, h)];
    for (i, w) in levels.windows(2).enumerate() {
        let gap = w[0] - w[1];
        l -= gap * (0.5 + 2.0 * steps[i].0);
        h += gap * (0.5 + 2.0 * steps[i].1);
        cuts.push((w[1], l, h));
    }
    let (min, max) = (l, h);
    let k = (span / (max - min)).min(1.0);
    let cuts: Vec<(f64, f64, f64)> =
        cuts.iter().map(|&(a, x, y)| (a, lo + (x - min) * k, lo + (y - min) * k)).collect();
    PiecewiseMF::from_cuts(&cuts).unwrap()
}

/// Upper function with a lower one obtained by pulling every cut towards
/// the core by the fraction `s`.
pub fn it2_in(lo: f64, span: f64) -> impl Strategy<Value = IT2MF> {
    (t1_in(lo, span), 0.0..1.0f64).prop_map(|(upper, s)| shrink(&upper, s))
}

pub fn it2() -> impl Strategy<Value = IT2MF> {
    it2_in(0.0, 1.0)
}

pub fn shrink(upper: &PiecewiseMF, s: f64) -> IT2MF {
    let core = upper.core();
    let cuts: Vec<(f64, f64, f64)> = upper
        .stored_cuts()
        .map(|(a, c)| (a, c.lo() + s * (core.lo() - c.lo()), c.hi() - s * (c.hi() - core.hi())))
        .collect();
    IT2MF::new(PiecewiseMF::from_cuts(&cuts).unwrap(), upper.clone()).unwrap()
}

/// Knot abscissas of both functions with a little room on each side.
pub fn probe_points(mfs: &[&PiecewiseMF]) -> Vec<f64> {
    let mut xs: Vec<f64> = mfs.iter().flat_map(|m| m.knots().points().iter().map(|p| p.0).collect::<Vec<_>>()).collect();
    let extra: Vec<f64> = xs.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    xs.extend(extra);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}
