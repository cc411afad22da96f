use serde::{Deserialize, Serialize};

use super::{AlphaLevels, FuzzyError, Interval, PiecewiseMF, Result, TOLERANCE};

/// A membership function given as `(x, membership)` points sorted by `x`.
///
/// The function is linear between consecutive points with distinct
/// abscissas, and zero outside `[first.x, last.x]`. Consecutive points with
/// the same abscissa form a vertical segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KnotProfile(Vec<(f64, f64)>);

impl KnotProfile {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(FuzzyError::NotFuzzyNumber("no knots".into()));
        }
        for &(x, m) in &points {
            if !x.is_finite() || !(0.0..=1.0).contains(&m) {
                return Err(FuzzyError::NotFuzzyNumber(format!("bad knot ({x}, {m})")));
            }
        }
        if points.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(FuzzyError::NotFuzzyNumber("knots are not sorted".into()));
        }
        Ok(KnotProfile::from_sorted_unchecked(points))
    }

    pub(crate) fn from_sorted_unchecked(points: Vec<(f64, f64)>) -> Self {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for p in points {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        KnotProfile(out)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.0
    }

    pub fn abscissas(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|p| p.0)
    }

    /// `lim_{t -> x-}` of the membership.
    pub fn left_limit(&self, x: f64) -> f64 {
        let pts = &self.0;
        let k = pts.partition_point(|p| p.0 < x);
        if k == 0 || k == pts.len() {
            return 0.0;
        }
        interpolate(pts[k - 1], pts[k], x)
    }

    /// `lim_{t -> x+}` of the membership.
    pub fn right_limit(&self, x: f64) -> f64 {
        let pts = &self.0;
        let k = pts.partition_point(|p| p.0 <= x);
        if k == 0 || k == pts.len() {
            return 0.0;
        }
        interpolate(pts[k - 1], pts[k], x)
    }

    /// Upper semicontinuous value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        let at = self
            .0
            .iter()
            .filter(|p| p.0 == x)
            .map(|p| p.1)
            .fold(0.0f64, f64::max);
        at.max(self.left_limit(x)).max(self.right_limit(x))
    }

    /// Converts the profile into α-cuts, using every distinct membership value
    /// of the knots as a level.
    pub fn to_piecewise(&self) -> Result<PiecewiseMF> {
        let pts = &self.0;
        let peak = pts.iter().map(|p| p.1).fold(0.0f64, f64::max);
        if peak < 1.0 - TOLERANCE {
            return Err(FuzzyError::NotFuzzyNumber(format!("maximum membership {peak} < 1")));
        }
        let first_top = pts.iter().position(|p| p.1 >= 1.0 - TOLERANCE).unwrap();
        let last_top = pts.iter().rposition(|p| p.1 >= 1.0 - TOLERANCE).unwrap();
        let rising = pts[..=first_top].windows(2).all(|w| w[1].1 >= w[0].1 - TOLERANCE);
        let falling = pts[last_top..].windows(2).all(|w| w[1].1 <= w[0].1 + TOLERANCE);
        let plateau = pts[first_top..=last_top].iter().all(|p| p.1 >= 1.0 - TOLERANCE);
        if !(rising && falling && plateau) {
            return Err(FuzzyError::NotFuzzyNumber("membership is not unimodal".into()));
        }
        let levels = AlphaLevels::from_unsorted(pts.iter().map(|p| p.1))?;
        let cuts = levels
            .iter()
            .map(|a| {
                let lo = self.lower_bound(a, first_top);
                let hi = self.upper_bound(a, last_top);
                Interval::new_lenient(lo, hi)
            })
            .collect::<Result<Vec<_>>>()?;
        PiecewiseMF::new(levels, cuts)
    }

    fn lower_bound(&self, alpha: f64, top: usize) -> f64 {
        let pts = &self.0[..=top];
        if alpha <= 0.0 {
            // closure of the support: the last zero knot before the rise
            let k = pts.iter().position(|p| p.1 > 0.0).unwrap_or(top);
            return if k == 0 { pts[0].0 } else { pts[k - 1].0 };
        }
        let k = pts.iter().position(|p| p.1 >= alpha - TOLERANCE).unwrap_or(top);
        if k == 0 || (pts[k].1 - alpha).abs() <= TOLERANCE {
            return pts[k].0;
        }
        inverse(pts[k - 1], pts[k], alpha)
    }

    fn upper_bound(&self, alpha: f64, top: usize) -> f64 {
        let pts = &self.0[top..];
        let n = pts.len();
        if alpha <= 0.0 {
            let k = pts.iter().rposition(|p| p.1 > 0.0).unwrap_or(0);
            return if k + 1 == n { pts[n - 1].0 } else { pts[k + 1].0 };
        }
        let k = pts.iter().rposition(|p| p.1 >= alpha - TOLERANCE).unwrap_or(0);
        if k + 1 == n || (pts[k].1 - alpha).abs() <= TOLERANCE {
            return pts[k].0;
        }
        inverse(pts[k + 1], pts[k], alpha)
    }
}

fn interpolate(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    if b.0 == a.0 {
        return b.1;
    }
    let t = (x - a.0) / (b.0 - a.0);
    let v = a.1 + t * (b.1 - a.1);
    v.clamp(a.1.min(b.1), a.1.max(b.1))
}

/// Abscissa where the segment from `a` (below `alpha`) to `b` (at or above
/// `alpha`) reaches `alpha`.
fn inverse(a: (f64, f64), b: (f64, f64), alpha: f64) -> f64 {
    if b.1 == a.1 {
        return b.0;
    }
    let t = (alpha - a.1) / (b.1 - a.1);
    let x = a.0 + t * (b.0 - a.0);
    x.clamp(a.0.min(b.0), a.0.max(b.0))
}
