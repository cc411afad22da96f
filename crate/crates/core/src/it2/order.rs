//! Admissible total orders, computed exactly on the rational values of the
//! stored cut endpoints.
//!
//! Type-1 numbers are compared by the key sequence
//! 1. the integral over α of the cut midpoint (larger is greater),
//! 2. the integral over α of the cut width (narrower is greater),
//! 3. the cuts `(lo, hi)` compared lexicographically on the merged level set,
//!    from α = 1 downwards.
//!
//! The first key already refines the componentwise α-cut order. The third
//! key separates any two different functions, so the order is total and
//! antisymmetric.
//!
//! Levels whose cut is the interpolant of its neighbours are dropped first,
//! so a stored representation with redundant levels compares equal to the
//! plain one. The first key is tried in floating point with a rounding
//! bound; exact arithmetic runs only when the bound cannot decide.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::IT2MF;
use crate::fuzzy::PiecewiseMF;
use crate::rational::{self, Rational};

/// Exact values of the first two keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T1Keys {
    pub midpoint_integral: Rational,
    pub width_integral: Rational,
}

struct ExactCuts(Vec<(Rational, Rational, Rational)>);

/// First key in floating point with a bound on its rounding error.
fn approximate_midpoint_integral(a: &PiecewiseMF) -> (f64, f64) {
    let cuts: Vec<(f64, f64, f64)> = a.stored_cuts().map(|(alpha, c)| (alpha, c.lo(), c.hi())).collect();
    let (mut sum, mut magnitude) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let ((a0, l0, h0), (a1, l1, h1)) = (w[0], w[1]);
        let da = a1 - a0;
        sum += da * (l0 + h0 + l1 + h1) / 4.0;
        magnitude += da.abs() * (l0.abs() + h0.abs() + l1.abs() + h1.abs()) / 4.0;
    }
    // each term carries at most 6 roundings and the sum n more; doubled
    let k = (cuts.len() + 8) as f64;
    (sum, 2.0 * k * f64::EPSILON * magnitude)
}

impl ExactCuts {
    fn of(a: &PiecewiseMF) -> Self {
        let q = |x: f64| rational::from_f64(x).expect("finite cut endpoint");
        ExactCuts(
            a.stored_cuts()
                .map(|(alpha, c)| (q(alpha), q(c.lo()), q(c.hi())))
                .collect(),
        )
    }

    fn keys(&self) -> T1Keys {
        let two = rational::int(2);
        let mut mid = rational::zero();
        let mut width = rational::zero();
        for w in self.0.windows(2) {
            let (a0, l0, h0) = &w[0];
            let (a1, l1, h1) = &w[1];
            let da = a1 - a0;
            // trapezoid rule is exact on linear pieces
            mid += &da * (l0 + h0 + l1 + h1) / (&two * &two);
            width += &da * (h0 - l0 + h1 - l1) / &two;
        }
        T1Keys { midpoint_integral: mid, width_integral: width }
    }

    fn cut_at(&self, alpha: &Rational) -> (Rational, Rational) {
        let v = &self.0;
        let u = v.partition_point(|c| c.0 < *alpha);
        if v[u].0 == *alpha {
            return (v[u].1.clone(), v[u].2.clone());
        }
        let (a0, l0, h0) = &v[u - 1];
        let (a1, l1, h1) = &v[u];
        let t = (alpha - a0) / (a1 - a0);
        (l0 + &t * (l1 - l0), h0 + &t * (h1 - h0))
    }
}

pub fn t1_keys(a: &PiecewiseMF) -> T1Keys {
    ExactCuts::of(&a.compress()).keys()
}

/// Total admissible order on piecewise-linear fuzzy numbers.
pub fn t1_admissible_order(a: &PiecewiseMF, b: &PiecewiseMF) -> Ordering {
    let (a, b) = (a.compress(), b.compress());
    let ((ka, ea), (kb, eb)) = (approximate_midpoint_integral(&a), approximate_midpoint_integral(&b));
    if (ka - kb).abs() > ea + eb {
        return ka.total_cmp(&kb);
    }
    let (ea, eb) = (ExactCuts::of(&a), ExactCuts::of(&b));
    let (ka, kb) = (ea.keys(), eb.keys());
    let by_keys = ka
        .midpoint_integral
        .cmp(&kb.midpoint_integral)
        .then_with(|| kb.width_integral.cmp(&ka.width_integral));
    if by_keys != Ordering::Equal {
        return by_keys;
    }
    let mut levels: Vec<Rational> = ea.0.iter().chain(eb.0.iter()).map(|c| c.0.clone()).collect();
    levels.sort();
    levels.dedup();
    for alpha in levels.iter().rev() {
        let ord = ea.cut_at(alpha).cmp(&eb.cut_at(alpha));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Lower functions first, then upper functions.
pub fn it2_order_1(a: &IT2MF, b: &IT2MF) -> Ordering {
    t1_admissible_order(a.lower(), b.lower()).then_with(|| t1_admissible_order(a.upper(), b.upper()))
}

/// Upper functions first, then lower functions.
pub fn it2_order_2(a: &IT2MF, b: &IT2MF) -> Ordering {
    t1_admissible_order(a.upper(), b.upper()).then_with(|| t1_admissible_order(a.lower(), b.lower()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum It2Order {
    #[serde(rename = "order_1")]
    Order1,
    #[serde(rename = "order_2")]
    Order2,
}

impl It2Order {
    pub fn compare(self, a: &IT2MF, b: &IT2MF) -> Ordering {
        match self {
            It2Order::Order1 => it2_order_1(a, b),
            It2Order::Order2 => it2_order_2(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            It2Order::Order1 => "order_1",
            It2Order::Order2 => "order_2",
        }
    }
}

impl std::str::FromStr for It2Order {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "order_1" | "1" => Ok(It2Order::Order1),
            "order_2" | "2" => Ok(It2Order::Order2),
            _ => Err(format!("unknown order {s:?}, expected order_1 or order_2")),
        }
    }
}
