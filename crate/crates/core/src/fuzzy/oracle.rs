//! Brute-force sup-min evaluation of the extension principle.
//!
//! This is a testing aid: it samples the supports on a grid and never goes
//! through the α-cut representation, so it can check the level-wise
//! arithmetic independently.

use super::{FuzzyError, PiecewiseMF, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Sum,
    Product,
}

/// Samples `(A op B)(z) = sup_{x op y = z} min(A(x), B(y))` on the grid
/// `z_k = z_min + k * grid_step` covering the support of the result.
///
/// For each `z` one operand is rasterized (grid over its support plus its
/// knot abscissas) and the other is solved for exactly; both directions are
/// tried, so point masses are handled.
pub fn extension_oracle(
    a: &PiecewiseMF,
    b: &PiecewiseMF,
    op: Operation,
    grid_step: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(FuzzyError::Domain(format!("grid step must be positive, got {grid_step}")));
    }
    let xs = samples(a, grid_step);
    let ys = samples(b, grid_step);
    let (sa, sb) = (a.support(), b.support());
    let (z_lo, z_hi) = match op {
        Operation::Sum => (sa.lo() + sb.lo(), sa.hi() + sb.hi()),
        Operation::Product => {
            let c = [sa.lo() * sb.lo(), sa.lo() * sb.hi(), sa.hi() * sb.lo(), sa.hi() * sb.hi()];
            (
                c.iter().copied().fold(f64::INFINITY, f64::min),
                c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )
        }
    };
    let n = ((z_hi - z_lo) / grid_step).ceil() as usize;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let z = (z_lo + k as f64 * grid_step).min(z_hi);
        out.push((z, sup_min(a, b, &xs, &ys, op, z)));
    }
    Ok(out)
}

fn samples(m: &PiecewiseMF, step: f64) -> Vec<f64> {
    let s = m.support();
    let n = (s.width() / step).ceil() as usize;
    let mut v: Vec<f64> = (0..=n).map(|k| (s.lo() + k as f64 * step).min(s.hi())).collect();
    v.extend(m.knots().abscissas());
    v
}

fn sup_min(a: &PiecewiseMF, b: &PiecewiseMF, xs: &[f64], ys: &[f64], op: Operation, z: f64) -> f64 {
    let mut best = 0.0f64;
    match op {
        Operation::Sum => {
            for &x in xs {
                best = best.max(a.evaluate(x).min(b.evaluate(z - x)));
            }
            for &y in ys {
                best = best.max(a.evaluate(z - y).min(b.evaluate(y)));
            }
        }
        Operation::Product => {
            for &x in xs {
                if x != 0.0 {
                    best = best.max(a.evaluate(x).min(b.evaluate(z / x)));
                } else if z == 0.0 {
                    best = best.max(a.evaluate(0.0));
                }
            }
            for &y in ys {
                if y != 0.0 {
                    best = best.max(a.evaluate(z / y).min(b.evaluate(y)));
                } else if z == 0.0 {
                    best = best.max(b.evaluate(0.0));
                }
            }
        }
    }
    best
}
