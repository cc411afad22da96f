//! Subjective membership ratios: consistency checks and the memberships they
//! determine.
//!
//! `ρ(x|y)` reads "the membership of `x` is `ρ(x|y)` times the membership of
//! `y`". Ratios are required for every `x` in the universe and every `y` in
//! the support.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Default relative tolerance of [`check_multiplicative`].
pub const DEFAULT_MULTIPLICATIVE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioJudgment {
    pub x: String,
    pub y: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectiveRatios {
    pub universe: Vec<String>,
    pub support_members: Vec<String>,
    pub ratios: Vec<RatioJudgment>,
}

/// Quadruple where the order of `x` and `y` depends on the reference:
/// `ρ(x|z) >= ρ(y|z)` and `ρ(x|w) >= ρ(y|w)` disagree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndependenceViolation {
    pub x: String,
    pub y: String,
    pub z: String,
    pub w: String,
}

/// Triple with `|ρ(x|z) − ρ(x|y)·ρ(y|z)| > tol·ρ(x|z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeViolation {
    pub x: String,
    pub y: String,
    pub z: String,
    pub expected: f64,
    pub actual: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RatioError {
    #[error("missing ratios for pairs {missing:?}")]
    Incomplete { missing: Vec<(String, String)> },
    #[error("unknown alternative {0:?}")]
    UnknownAlternative(String),
    #[error("duplicate alternative or ratio {0:?}")]
    Duplicate(String),
    #[error("ratio {x}|{y} must be positive and finite, got {value}")]
    NotPositive { x: String, y: String, value: f64 },
    #[error("reference {0:?} is not a support member")]
    ReferenceNotInSupport(String),
    #[error(
        "inconsistent ratios: {} reference independence and {} multiplicative violations",
        independence.len(),
        multiplicative.len()
    )]
    Inconsistent {
        independence: Vec<IndependenceViolation>,
        multiplicative: Vec<MultiplicativeViolation>,
    },
}

/// Ratios indexed by position: `rho[x][k]` is `ρ(x | support[k])`.
struct Table<'a> {
    names: &'a [String],
    support: Vec<usize>,
    rho: Vec<Vec<f64>>,
}

impl<'a> Table<'a> {
    fn build(r: &'a SubjectiveRatios) -> Result<Self, RatioError> {
        let mut index = HashMap::new();
        for (i, name) in r.universe.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(RatioError::Duplicate(name.clone()));
            }
        }
        let lookup = |name: &String| {
            index
                .get(name.as_str())
                .copied()
                .ok_or_else(|| RatioError::UnknownAlternative(name.clone()))
        };
        let mut support = Vec::new();
        for s in &r.support_members {
            let i = lookup(s)?;
            if support.contains(&i) {
                return Err(RatioError::Duplicate(s.clone()));
            }
            support.push(i);
        }
        support.sort_unstable();
        let n = r.universe.len();
        let mut rho = vec![vec![f64::NAN; support.len()]; n];
        for j in &r.ratios {
            let x = lookup(&j.x)?;
            let y = lookup(&j.y)?;
            if !(j.value.is_finite() && j.value > 0.0) {
                return Err(RatioError::NotPositive {
                    x: j.x.clone(),
                    y: j.y.clone(),
                    value: j.value,
                });
            }
            // ratios against non-support references are not used
            let Some(k) = support.iter().position(|&s| s == y) else {
                continue;
            };
            if !rho[x][k].is_nan() {
                return Err(RatioError::Duplicate(format!("{}|{}", j.x, j.y)));
            }
            rho[x][k] = j.value;
        }
        let mut missing = Vec::new();
        for (x, row) in rho.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if v.is_nan() {
                    missing.push((r.universe[x].clone(), r.universe[support[k]].clone()));
                }
            }
        }
        if !missing.is_empty() {
            return Err(RatioError::Incomplete { missing });
        }
        Ok(Table { names: &r.universe, support, rho })
    }

    fn name(&self, i: usize) -> String {
        self.names[i].clone()
    }
}

/// Every pair `x < y` (universe order) whose comparison changes between two
/// references `z < w` (universe order) from the support. Each offending
/// combination is reported once.
pub fn check_reference_independence(
    r: &SubjectiveRatios,
) -> Result<Vec<IndependenceViolation>, RatioError> {
    let t = Table::build(r)?;
    let n = t.names.len();
    let m = t.support.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            for kz in 0..m {
                for kw in kz + 1..m {
                    let at_z = t.rho[x][kz] >= t.rho[y][kz];
                    let at_w = t.rho[x][kw] >= t.rho[y][kw];
                    if at_z != at_w {
                        out.push(IndependenceViolation {
                            x: t.name(x),
                            y: t.name(y),
                            z: t.name(t.support[kz]),
                            w: t.name(t.support[kw]),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every triple with `x` in the universe and `y`, `z` in the support where
/// `ρ(x|z)` differs from `ρ(x|y)·ρ(y|z)` by more than `tol·ρ(x|z)`.
pub fn check_multiplicative(
    r: &SubjectiveRatios,
    tol: f64,
) -> Result<Vec<MultiplicativeViolation>, RatioError> {
    let t = Table::build(r)?;
    let n = t.names.len();
    let m = t.support.len();
    let mut out = Vec::new();
    for x in 0..n {
        for ky in 0..m {
            let y = t.support[ky];
            for kz in 0..m {
                let actual = t.rho[x][kz];
                let expected = t.rho[x][ky] * t.rho[y][kz];
                if (actual - expected).abs() > tol * actual {
                    out.push(MultiplicativeViolation {
                        x: t.name(x),
                        y: t.name(y),
                        z: t.name(t.support[kz]),
                        expected,
                        actual,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `μ(x) = ρ(x|w) / max_y ρ(y|w)` in universe order, after both consistency
/// checks pass with the default tolerance.
pub fn memberships_from_ratios(
    r: &SubjectiveRatios,
    reference: &str,
) -> Result<Vec<(String, f64)>, RatioError> {
    memberships_from_ratios_with_tolerance(r, reference, DEFAULT_MULTIPLICATIVE_TOLERANCE)
}

pub fn memberships_from_ratios_with_tolerance(
    r: &SubjectiveRatios,
    reference: &str,
    tol: f64,
) -> Result<Vec<(String, f64)>, RatioError> {
    let t = Table::build(r)?;
    let Some(w) = r.universe.iter().position(|n| n == reference) else {
        return Err(RatioError::UnknownAlternative(reference.to_string()));
    };
    let Some(kw) = t.support.iter().position(|&s| s == w) else {
        return Err(RatioError::ReferenceNotInSupport(reference.to_string()));
    };
    let independence = check_reference_independence(r)?;
    let multiplicative = check_multiplicative(r, tol)?;
    if !independence.is_empty() || !multiplicative.is_empty() {
        return Err(RatioError::Inconsistent { independence, multiplicative });
    }
    let max = t.rho.iter().map(|row| row[kw]).fold(0.0f64, f64::max);
    Ok(t.names
        .iter()
        .zip(&t.rho)
        .map(|(name, row)| (name.clone(), row[kw] / max))
        .collect())
}

/// The ratio table `ρ(x|y) = μ(x)/μ(y)` induced by memberships, with every
/// alternative of positive membership in the support.
pub fn ratios_from_memberships(mu: &[(String, f64)]) -> SubjectiveRatios {
    let universe: Vec<String> = mu.iter().map(|(n, _)| n.clone()).collect();
    let support: Vec<&(String, f64)> = mu.iter().filter(|(_, m)| *m > 0.0).collect();
    let mut ratios = Vec::new();
    for (x, mx) in mu {
        for (y, my) in &support {
            ratios.push(RatioJudgment { x: x.clone(), y: y.clone(), value: mx / my });
        }
    }
    SubjectiveRatios {
        universe,
        support_members: support.iter().map(|(n, _)| n.clone()).collect(),
        ratios,
    }
}
