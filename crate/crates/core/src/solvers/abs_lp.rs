use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::simplex::{Simplex, Status};
use super::SolverError;
use crate::rational::{self, Rational};

/// Objective term `|x[target] − coef · x[source]|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsTerm {
    pub target: usize,
    #[serde(with = "rational::serde_str")]
    pub coef: Rational,
    pub source: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `Σ coeffs · x  relation  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Minimize `Σ |x_t − c·x_s|` subject to `x ≥ lower_bounds` and the linear
/// constraints.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LpProblem {
    pub lower_bounds: Vec<Rational>,
    pub terms: Vec<AbsTerm>,
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub objective: Rational,
    pub values: Vec<Rational>,
}

/// Exact optimum. Among optimal points the lexicographically smallest
/// assignment is returned.
pub fn solve_abs_lp(p: &LpProblem) -> Result<LpSolution, SolverError> {
    let nv = p.lower_bounds.len();
    for t in &p.terms {
        if t.target >= nv || t.source >= nv {
            return Err(SolverError::Domain(format!(
                "term refers to variable {} but only {nv} exist",
                t.target.max(t.source)
            )));
        }
    }
    for c in &p.constraints {
        if let Some((i, _)) = c.coeffs.iter().find(|(i, _)| *i >= nv) {
            return Err(SolverError::Domain(format!(
                "constraint refers to variable {i} but only {nv} exist"
            )));
        }
    }

    // columns: y (x shifted by its lower bound), then p_k, n_k per term,
    // then one slack per inequality
    let nt = p.terms.len();
    let ns = p
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let n = nv + 2 * nt + ns;
    let lb = &p.lower_bounds;
    let mut rows = Vec::with_capacity(nt + p.constraints.len());
    for (k, t) in p.terms.iter().enumerate() {
        let mut a = vec![Rational::zero(); n];
        a[t.target] += rational::one();
        a[t.source] -= &t.coef;
        a[nv + 2 * k] = -rational::one();
        a[nv + 2 * k + 1] = rational::one();
        let b = &t.coef * &lb[t.source] - &lb[t.target];
        rows.push((a, b));
    }
    let mut slack = nv + 2 * nt;
    for c in &p.constraints {
        let mut a = vec![Rational::zero(); n];
        let mut b = c.rhs.clone();
        for (i, v) in &c.coeffs {
            a[*i] += v;
            b -= v * &lb[*i];
        }
        match c.relation {
            Relation::Eq => {}
            Relation::Le => {
                a[slack] = rational::one();
                slack += 1;
            }
            Relation::Ge => {
                a[slack] = -rational::one();
                slack += 1;
            }
        }
        rows.push((a, b));
    }

    let mut s = Simplex::new(n, rows);
    if !s.is_feasible() {
        return Err(SolverError::Infeasible);
    }
    let mut cost = vec![Rational::zero(); n];
    for c in cost.iter_mut().skip(nv).take(2 * nt) {
        *c = rational::one();
    }
    expect_optimal(s.minimize(&cost))?;
    let objective = s.objective_value();
    for i in 0..nv {
        s.restrict_to_optimal_face();
        let mut cost = vec![Rational::zero(); n];
        cost[i] = rational::one();
        expect_optimal(s.minimize(&cost))?;
    }
    let y = s.solution();
    let values = y.iter().zip(lb).map(|(y, l)| y + l).collect();
    Ok(LpSolution { objective, values })
}

fn expect_optimal(status: Status) -> Result<(), SolverError> {
    match status {
        Status::Optimal => Ok(()),
        Status::Infeasible => Err(SolverError::Infeasible),
        // the objective is bounded below by 0 and the lexicographic stages
        // minimize variables bounded below by 0
        Status::Unbounded => Err(SolverError::Internal(
            "simplex reported an unbounded objective that is bounded below".into(),
        )),
    }
}
