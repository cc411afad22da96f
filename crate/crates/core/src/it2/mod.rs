//! Interval type-2 fuzzy numbers: a lower and an upper piecewise-linear
//! membership function with the lower one dominated pointwise.

mod order;

use serde::{Deserialize, Serialize};

use crate::fuzzy::{self, FuzzyError, Interval, PiecewiseMF, Result, TOLERANCE};

pub use order::{it2_order_1, it2_order_2, t1_admissible_order, t1_keys, It2Order, T1Keys};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIt2", into = "RawIt2")]
pub struct IT2MF {
    lower: PiecewiseMF,
    upper: PiecewiseMF,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIt2 {
    lower: PiecewiseMF,
    upper: PiecewiseMF,
}

impl TryFrom<RawIt2> for IT2MF {
    type Error = FuzzyError;
    fn try_from(r: RawIt2) -> Result<Self> {
        IT2MF::new(r.lower, r.upper)
    }
}

impl From<IT2MF> for RawIt2 {
    fn from(a: IT2MF) -> Self {
        RawIt2 { lower: a.lower, upper: a.upper }
    }
}

impl IT2MF {
    /// Checks `lower <= upper` at every knot of either function (including
    /// one-sided limits) and that the lower core lies in the upper core.
    pub fn new(lower: PiecewiseMF, upper: PiecewiseMF) -> Result<Self> {
        let lk = lower.knots();
        let uk = upper.knots();
        let mut xs: Vec<f64> = lk.abscissas().chain(uk.abscissas()).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        for &x in &xs {
            let l = [lk.left_limit(x), lk.value(x), lk.right_limit(x)];
            let u = [uk.left_limit(x), uk.value(x), uk.right_limit(x)];
            if l.iter().zip(&u).any(|(l, u)| *l > *u + TOLERANCE) {
                return Err(FuzzyError::Domain(format!(
                    "lower membership exceeds upper membership at x = {x}"
                )));
            }
        }
        if !upper.core().contains_interval(&lower.core(), TOLERANCE) {
            return Err(FuzzyError::Domain(format!(
                "lower core {} is not inside upper core {}",
                lower.core(),
                upper.core()
            )));
        }
        Ok(IT2MF { lower, upper })
    }

    /// A type-1 number seen as a degenerate type-2 number.
    pub fn degenerate(a: PiecewiseMF) -> Self {
        IT2MF { lower: a.clone(), upper: a }
    }

    pub fn lower(&self) -> &PiecewiseMF {
        &self.lower
    }

    pub fn upper(&self) -> &PiecewiseMF {
        &self.upper
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// `(lower(x), upper(x))`.
    pub fn evaluate(&self, x: f64) -> (f64, f64) {
        (self.lower.evaluate(x), self.upper.evaluate(x))
    }
}

/// The pair of α-cuts `(lower_α, upper_α)`. At α = 0 these are the closures
/// of the supports.
pub fn it2_alpha_cut(a: &IT2MF, alpha: f64) -> Result<(Interval, Interval)> {
    Ok((a.lower.alpha_cut(alpha)?, a.upper.alpha_cut(alpha)?))
}

pub fn it2_add(a: &IT2MF, b: &IT2MF) -> IT2MF {
    IT2MF {
        lower: fuzzy::add(&a.lower, &b.lower),
        upper: fuzzy::add(&a.upper, &b.upper),
    }
}

pub fn it2_scale(r: f64, a: &IT2MF) -> Result<IT2MF> {
    Ok(IT2MF {
        lower: fuzzy::scale(r, &a.lower)?,
        upper: fuzzy::scale(r, &a.upper)?,
    })
}

pub fn it2_weighted_average(items: &[IT2MF], weights: &[f64]) -> Result<IT2MF> {
    let lowers: Vec<PiecewiseMF> = items.iter().map(|a| a.lower.clone()).collect();
    let uppers: Vec<PiecewiseMF> = items.iter().map(|a| a.upper.clone()).collect();
    Ok(IT2MF {
        lower: fuzzy::weighted_average(&lowers, weights)?,
        upper: fuzzy::weighted_average(&uppers, weights)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: f64, b: f64, c: f64) -> PiecewiseMF {
        PiecewiseMF::triangular(a, b, c).unwrap()
    }

    #[test]
    fn dominance_is_checked() {
        assert!(IT2MF::new(tri(0.2, 0.5, 0.8), tri(0.1, 0.5, 0.9)).is_ok());
        assert!(IT2MF::new(tri(0.1, 0.5, 0.9), tri(0.2, 0.5, 0.8)).is_err());
        // lower core outside the upper core
        let upper = PiecewiseMF::trapezoidal(0.0, 0.4, 0.5, 1.0).unwrap();
        let lower = tri(0.45, 0.45, 0.45);
        assert!(IT2MF::new(lower.clone(), upper.clone()).is_ok());
        let lower = tri(0.6, 0.6, 0.6);
        assert!(IT2MF::new(lower, upper).is_err());
    }

    #[test]
    fn dominance_sees_jumps() {
        let lower = PiecewiseMF::from_cuts(&[(0.0, 0.3, 0.7), (1.0, 0.5, 0.5)]).unwrap();
        let upper = PiecewiseMF::from_cuts(&[(0.0, 0.3, 0.7), (0.5, 0.3, 0.7), (1.0, 0.5, 0.5)]).unwrap();
        assert!(IT2MF::new(lower.clone(), upper.clone()).is_ok());
        assert!(IT2MF::new(upper, lower).is_err());
    }

    #[test]
    fn cuts_of_degenerate_and_core() {
        let a = IT2MF::degenerate(tri(0.2, 0.5, 0.8));
        let (l, u) = it2_alpha_cut(&a, 0.5).unwrap();
        assert_eq!(l, u);
        let b = IT2MF::new(tri(0.3, 0.5, 0.7), PiecewiseMF::trapezoidal(0.1, 0.4, 0.6, 0.9).unwrap()).unwrap();
        let (l, u) = it2_alpha_cut(&b, 1.0).unwrap();
        assert_eq!((l, u), (b.lower().core(), b.upper().core()));
    }

    #[test]
    fn arithmetic_examples() {
        let a = IT2MF::new(tri(0.3, 0.5, 0.7), tri(0.1, 0.5, 0.9)).unwrap();
        let zero = IT2MF::degenerate(PiecewiseMF::point(0.0).unwrap());
        assert_eq!(it2_add(&a, &zero), a);
        let d = IT2MF::degenerate(tri(0.0, 0.1, 0.2));
        let s = it2_add(&d, &d);
        assert_eq!(s.lower(), &fuzzy::add(d.lower(), d.lower()));
        assert_eq!(it2_scale(1.0, &a).unwrap(), a);
        let two = it2_scale(2.0, &a).unwrap();
        assert_eq!(two.upper(), &tri(0.2, 1.0, 1.8));
        assert_eq!(it2_weighted_average(&[a.clone()], &[1.0]).unwrap(), a);
    }

    #[test]
    fn json_layout() {
        let a = IT2MF::new(tri(0.3, 0.5, 0.7), tri(0.1, 0.5, 0.9)).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        assert!(v.get("lower").is_some() && v.get("upper").is_some());
        let back: IT2MF = serde_json::from_value(v).unwrap();
        assert_eq!(back, a);
        let bad = serde_json::json!({"lower": a.upper(), "upper": a.lower()});
        assert!(serde_json::from_value::<IT2MF>(bad).is_err());
    }
}
