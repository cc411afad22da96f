use super::{ElicitationError, Result};
use crate::fuzzy::{KnotProfile, PiecewiseMF, TOLERANCE};
use crate::it2::IT2MF;

/// Pointwise minimum and maximum of a family of fuzzy numbers sharing a core
/// point.
///
/// Both envelopes are piecewise linear with knots at the knots of the members
/// and at the points where the extreme member changes between two
/// consecutive knots; all of these are computed, so the result is exact up
/// to floating-point rounding.
pub fn envelope_it2(family: &[PiecewiseMF]) -> Result<IT2MF> {
    let first = family
        .first()
        .ok_or_else(|| ElicitationError::Domain("the family is empty".into()))?;
    let mut members: Vec<&PiecewiseMF> = Vec::with_capacity(family.len());
    for m in family {
        if !members.contains(&m) {
            members.push(m);
        }
    }
    if members.len() == 1 {
        return Ok(IT2MF::degenerate(first.clone()));
    }
    let lo = members.iter().map(|m| m.core().lo()).fold(f64::MIN, f64::max);
    let hi = members.iter().map(|m| m.core().hi()).fold(f64::MAX, f64::min);
    if lo > hi + TOLERANCE {
        return Err(ElicitationError::Domain(
            "the members do not share a core point".into(),
        ));
    }

    let profiles: Vec<KnotProfile> = members.iter().map(|m| m.knots()).collect();
    let mut xs: Vec<f64> = profiles.iter().flat_map(|p| p.abscissas()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    // (left limit, value, right limit) of every member at every abscissa
    let samples: Vec<Vec<[f64; 3]>> = xs
        .iter()
        .map(|&x| {
            profiles
                .iter()
                .map(|p| [p.left_limit(x), p.value(x), p.right_limit(x)])
                .collect()
        })
        .collect();

    let lower = envelope_profile(&xs, &samples, Extreme::Min)?;
    let upper = envelope_profile(&xs, &samples, Extreme::Max)?;
    Ok(IT2MF::new(lower.to_piecewise()?, upper.to_piecewise()?)?)
}

#[derive(Clone, Copy)]
enum Extreme {
    Min,
    Max,
}

impl Extreme {
    fn pick(self, a: f64, b: f64) -> f64 {
        match self {
            Extreme::Min => a.min(b),
            Extreme::Max => a.max(b),
        }
    }

    /// Sign so that the extreme becomes a minimum.
    fn sign(self) -> f64 {
        match self {
            Extreme::Min => 1.0,
            Extreme::Max => -1.0,
        }
    }
}

fn envelope_profile(xs: &[f64], samples: &[Vec<[f64; 3]>], ext: Extreme) -> Result<KnotProfile> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (k, &x) in xs.iter().enumerate() {
        let at = &samples[k];
        let fold = |i: usize| at.iter().map(|s| s[i]).reduce(|a, b| ext.pick(a, b)).unwrap();
        for v in [fold(0), fold(1), fold(2)] {
            pts.push((x, v));
        }
        if k + 1 < xs.len() {
            let x1 = xs[k + 1];
            let lines: Vec<(f64, f64)> = at
                .iter()
                .zip(&samples[k + 1])
                .map(|(a, b)| (a[2], b[0]))
                .collect();
            pts.extend(crossings(x, x1, &lines, ext));
        }
    }
    Ok(KnotProfile::new(pts.into_iter().map(|(x, v)| (x, v.clamp(0.0, 1.0))).collect())?)
}

/// Interior points of `(x0, x1)` where the extreme of the segments
/// `(x0, y0) – (x1, y1)` switches from one segment to another.
fn crossings(x0: f64, x1: f64, lines: &[(f64, f64)], ext: Extreme) -> Vec<(f64, f64)> {
    let sg = ext.sign();
    // work with the minimum of sign-adjusted lines y0 + slope·u, u in [0, 1]
    let l: Vec<(f64, f64)> = lines.iter().map(|&(a, b)| (sg * a, sg * (b - a))).collect();
    let mut cur = (0..l.len())
        .min_by(|&i, &j| l[i].0.total_cmp(&l[j].0).then(l[i].1.total_cmp(&l[j].1)))
        .unwrap();
    let mut u = 0.0;
    let mut out = Vec::new();
    loop {
        let (y, s) = l[cur];
        let mut next: Option<(f64, usize)> = None;
        for (j, &(yj, sj)) in l.iter().enumerate() {
            if sj >= s {
                continue;
            }
            let uj = (yj - y) / (s - sj);
            if !(uj > u && uj < 1.0) {
                continue;
            }
            let better = match next {
                None => true,
                Some((un, jn)) => uj < un || (uj == un && sj < l[jn].1),
            };
            if better {
                next = Some((uj, j));
            }
        }
        let Some((un, jn)) = next else {
            return out;
        };
        let x = x0 + un * (x1 - x0);
        if x > x0 && x < x1 {
            out.push((x, sg * (y + s * un)));
        }
        cur = jn;
        u = un;
    }
}
