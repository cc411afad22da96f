use serde::{Deserialize, Serialize};

use super::{CoreSupport, ElicitationError, Result};
use crate::fuzzy::{KnotProfile, PiecewiseMF, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `(support edge, core edge)` on this side.
    pub fn edges(self, cs: &CoreSupport) -> (f64, f64) {
        match self {
            Side::Left => (cs.support().lo(), cs.core().lo()),
            Side::Right => (cs.support().hi(), cs.core().hi()),
        }
    }
}

/// One monotone side of a membership function as `(x, membership)` knots
/// sorted by `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideFragment {
    pub side: Side,
    pub points: Vec<(f64, f64)>,
}

/// Positions of `p` items evenly spread from the support edge to the core
/// edge.
pub fn uniform_breakpoints(p: usize, side: Side, cs: &CoreSupport) -> Vec<f64> {
    let (s, c) = side.edges(cs);
    if p < 2 {
        return vec![c; p];
    }
    (0..p)
        .map(|r| {
            if r == 0 {
                s
            } else if r == p - 1 {
                c
            } else {
                s + (c - s) * r as f64 / (p - 1) as f64
            }
        })
        .collect()
}

/// Side with membership `values[r]` at `breakpoints[r]`. Both lists run from
/// the support edge (membership 0) to the core edge (membership 1), so left
/// breakpoints increase and right breakpoints decrease. When the support and
/// core edges coincide the side is vertical and has no inner items.
pub fn build_t1_side(
    values: &[f64],
    breakpoints: &[f64],
    side: Side,
    cs: &CoreSupport,
) -> Result<SideFragment> {
    let p = values.len();
    if p < 2 || breakpoints.len() != p {
        return Err(ElicitationError::Domain(format!(
            "{p} values need as many breakpoints (at least two), got {}",
            breakpoints.len()
        )));
    }
    if values[0] != 0.0 || values[p - 1] != 1.0 {
        return Err(ElicitationError::Domain(
            "side values must run from 0 at the support edge to 1 at the core edge".into(),
        ));
    }
    if values.windows(2).any(|w| w[1] < w[0]) || values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(ElicitationError::Domain("side values must increase towards the core".into()));
    }
    let (s, c) = side.edges(cs);
    if (breakpoints[0] - s).abs() > TOLERANCE || (breakpoints[p - 1] - c).abs() > TOLERANCE {
        return Err(ElicitationError::Domain(format!(
            "breakpoints must start at the support edge {s} and end at the core edge {c}"
        )));
    }
    let mut xs = breakpoints.to_vec();
    xs[0] = s;
    xs[p - 1] = c;
    if s == c {
        if p != 2 {
            return Err(ElicitationError::Domain(format!(
                "support and core meet at {s}; there is no room for {} inner items",
                p - 2
            )));
        }
    } else {
        let increasing = xs.windows(2).all(|w| w[1] > w[0]);
        let decreasing = xs.windows(2).all(|w| w[1] < w[0]);
        let ok = match side {
            Side::Left => increasing,
            Side::Right => decreasing,
        };
        if !ok {
            return Err(ElicitationError::Domain(format!(
                "breakpoints of the {side:?} side must be strictly monotone from the support edge to the core edge"
            )));
        }
    }
    let mut points: Vec<(f64, f64)> = xs.into_iter().zip(values.iter().copied()).collect();
    if side == Side::Right {
        points.reverse();
    }
    Ok(SideFragment { side, points })
}

/// Joins a left side, the core plateau and a right side into one fuzzy
/// number. Its levels are the union of the side values.
pub fn assemble(left: &SideFragment, right: &SideFragment) -> Result<PiecewiseMF> {
    if left.side != Side::Left || right.side != Side::Right {
        return Err(ElicitationError::Domain("expected a left and a right side".into()));
    }
    let pts: Vec<(f64, f64)> = left.points.iter().chain(&right.points).copied().collect();
    let profile = KnotProfile::new(pts)?;
    Ok(profile.to_piecewise()?)
}
