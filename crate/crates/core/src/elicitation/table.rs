use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ElicitationError, Result};
use crate::rational::{self, Rational};
use crate::solvers::{self, AbsTerm, IntAllocProblem, LinearConstraint, LpProblem, Relation};

/// Ratio `a^s_r = Ā(x_s) / Ā(x_r)` for `s > r >= 2` (1-based positions in
/// the chain). `modified` marks entries changed by the decision maker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub s: usize,
    pub r: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    #[serde(default)]
    pub modified: bool,
}

/// Upper-triangular table of ratios over a chain of `n` items. The first
/// item is left out since its membership is negligible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioTable {
    pub n: usize,
    pub entries: Vec<RatioEntry>,
}

impl RatioTable {
    pub fn get(&self, s: usize, r: usize) -> Option<&Rational> {
        self.entries.iter().find(|e| e.s == s && e.r == r).map(|e| &e.value)
    }

    /// Replaces an entry with the decision maker's judgment.
    pub fn modify(&mut self, s: usize, r: usize, value: Rational) -> Result<()> {
        if !value.is_positive() {
            return Err(ElicitationError::Domain(format!(
                "ratio a^{s}_{r} must be positive, got {}",
                rational::format(&value)
            )));
        }
        let n = self.n;
        let e = self
            .entries
            .iter_mut()
            .find(|e| e.s == s && e.r == r)
            .ok_or_else(|| {
                ElicitationError::Domain(format!(
                    "no ratio a^{s}_{r} in a table over {n} items (need {n} >= s > r >= 2)"
                ))
            })?;
        e.value = value;
        e.modified = true;
        Ok(())
    }

    pub fn is_modified(&self) -> bool {
        self.entries.iter().any(|e| e.modified)
    }
}

/// Ratio table of non-normalized values.
pub fn ratio_table(values: &[Rational]) -> Result<RatioTable> {
    let n = values.len();
    if n < 2 {
        return Err(ElicitationError::Domain("a ratio table needs at least two values".into()));
    }
    if let Some(r) = (1..n).find(|&i| !values[i].is_positive()) {
        return Err(ElicitationError::Internal(format!(
            "value at position {} is {}, ratios need positive values",
            r + 1,
            rational::format(&values[r])
        )));
    }
    let mut entries = Vec::new();
    for r in 2..=n {
        for s in r + 1..=n {
            entries.push(RatioEntry {
                s,
                r,
                value: &values[s - 1] / &values[r - 1],
                modified: false,
            });
        }
    }
    Ok(RatioTable { n, entries })
}

/// Which side of a ratio term carries the coefficient in the adjustment LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `|Ā^m(x_s) − ā^s_r·Ā^m(x_r)|`, consistent with `a^s_r = Ā(x_s)/Ā(x_r)`.
    #[default]
    Step5,
    /// `|Ā^m(x_r) − ā^s_r·Ā^m(x_s)|` as the model is written.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjustment {
    /// `Ā^m(x₁) = 0` followed by the fitted values.
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub objective: Rational,
}

/// Non-normalized values that fit the (modified) ratio table best in the
/// sum of absolute deviations, with every value at least 1 and the chain
/// order kept (`Ā^m(x_2) <= … <= Ā^m(x_p)`). Among optimal fits the
/// lexicographically smallest one is returned.
pub fn adjust_values(table: &RatioTable, orientation: Orientation) -> Result<Adjustment> {
    let n = table.n;
    if n < 2 {
        return Err(ElicitationError::Domain("a ratio table needs at least two items".into()));
    }
    // variable k holds Ā^m(x_{k+2})
    let terms = table
        .entries
        .iter()
        .map(|e| {
            if !(e.s > e.r && e.r >= 2 && e.s <= n) {
                return Err(ElicitationError::Domain(format!(
                    "entry a^{}_{} is outside a table over {n} items",
                    e.s, e.r
                )));
            }
            if !e.value.is_positive() {
                return Err(ElicitationError::Domain(format!(
                    "ratio a^{}_{} must be positive",
                    e.s, e.r
                )));
            }
            let (target, source) = match orientation {
                Orientation::Step5 => (e.s - 2, e.r - 2),
                Orientation::Literal => (e.r - 2, e.s - 2),
            };
            Ok(AbsTerm { target, coef: e.value.clone(), source })
        })
        .collect::<Result<Vec<_>>>()?;
    let problem = LpProblem {
        lower_bounds: vec![rational::one(); n - 1],
        terms,
        constraints: (1..n - 1)
            .map(|k| LinearConstraint {
                coeffs: vec![(k, rational::one()), (k - 1, -rational::one())],
                relation: Relation::Ge,
                rhs: rational::zero(),
            })
            .collect(),
    };
    let sol = solvers::solve_abs_lp(&problem)?;
    let mut values = vec![rational::zero()];
    values.extend(sol.values);
    Ok(Adjustment { values, objective: sol.objective })
}

/// Card gaps reproducing given non-normalized values as closely as possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardFit {
    pub gaps: Vec<u32>,
    pub total: u64,
    #[serde(with = "rational::serde_str")]
    pub objective: Rational,
}

/// For every total `h` in `[p−1, h_max]`, splits `h` into shares
/// `e_r + 1 >= 1` closest in L1 to `Δ_r·h/Ā(x_p)`; keeps the best total.
/// Ties go to the smaller total, then to the lexicographically smallest gaps.
pub fn cards_from_values(values: &[Rational], h_max: u64) -> Result<CardFit> {
    let p = values.len();
    if p < 2 {
        return Err(ElicitationError::Domain("at least two values are needed".into()));
    }
    if !values[0].is_zero() {
        return Err(ElicitationError::Domain("the first value must be 0".into()));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ElicitationError::Domain("values must be strictly increasing".into()));
    }
    let min_total = (p - 1) as u64;
    if h_max < min_total {
        return Err(ElicitationError::Domain(format!(
            "h_max = {h_max} is below the number of gaps {min_total}"
        )));
    }
    let last = &values[p - 1];
    let shares: Vec<Rational> = values.windows(2).map(|w| (&w[1] - &w[0]) / last).collect();
    let mut best: Option<CardFit> = None;
    for h in min_total..=h_max {
        let hq = rational::int(h as i64);
        let targets = shares.iter().map(|s| s * &hq).collect();
        let alloc = solvers::solve_int_alloc(&IntAllocProblem { targets, total: h })?;
        if best.as_ref().map_or(true, |b| alloc.objective < b.objective) {
            best = Some(CardFit {
                gaps: alloc.shares.iter().map(|&s| (s - 1) as u32).collect(),
                total: h,
                objective: alloc.objective,
            });
            if best.as_ref().unwrap().objective.is_zero() {
                break;
            }
        }
    }
    Ok(best.expect("at least one total is tried"))
}
