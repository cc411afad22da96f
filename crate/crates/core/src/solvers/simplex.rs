//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are in equality form `A x = b, x >= 0`. After an objective has
//! been minimized, [`Simplex::restrict_to_optimal_face`] pins every nonbasic
//! column with positive reduced cost at zero, so the next objective is
//! minimized over the optimal face only. That gives lexicographic optima
//! without re-solving from scratch.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

pub(crate) struct Simplex {
    n: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    allowed: Vec<bool>,
    obj: Vec<Rational>,
    feasible: bool,
}

impl Simplex {
    /// Sets up `A x = b, x >= 0` and runs phase one.
    pub fn new(n: usize, constraints: Vec<(Vec<Rational>, Rational)>) -> Self {
        let m = constraints.len();
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, (mut a, mut b)) in constraints.into_iter().enumerate() {
            debug_assert_eq!(a.len(), n);
            if b.is_negative() {
                a.iter_mut().for_each(|v| *v = -v.clone());
                b = -b;
            }
            let mut row = a;
            row.resize(width, Rational::zero());
            row[n + i] = crate::rational::one();
            row[width - 1] = b;
            rows.push(row);
        }
        let mut s = Simplex {
            n,
            rows,
            basis: (n..n + m).collect(),
            allowed: (0..n + m).map(|_| true).collect(),
            obj: vec![Rational::zero(); width],
            feasible: false,
        };
        s.phase_one();
        s
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    fn width(&self) -> usize {
        self.obj.len()
    }

    fn phase_one(&mut self) {
        let width = self.width();
        let n = self.n;
        let m = self.rows.len();
        // cost 1 on artificials, priced out against the artificial basis
        let mut obj = vec![Rational::zero(); width];
        for j in n..n + m {
            obj[j] = crate::rational::one();
        }
        for row in &self.rows {
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= v;
            }
        }
        self.obj = obj;
        let status = self.optimize();
        debug_assert_eq!(status, Status::Optimal);
        let value = -self.obj[width - 1].clone();
        self.feasible = value.is_zero();
        if !self.feasible {
            return;
        }
        // drive artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= n {
                match (0..n).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for j in n..n + m {
            self.allowed[j] = false;
        }
    }

    /// Minimizes `cost · x` (length `n`) over the current feasible set.
    pub fn minimize(&mut self, cost: &[Rational]) -> Status {
        if !self.feasible {
            return Status::Infeasible;
        }
        let width = self.width();
        let mut obj = vec![Rational::zero(); width];
        obj[..self.n].clone_from_slice(cost);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = if self.basis[i] < self.n {
                cost[self.basis[i]].clone()
            } else {
                Rational::zero()
            };
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= &cb * v;
            }
        }
        self.obj = obj;
        self.optimize()
    }

    pub fn objective_value(&self) -> Rational {
        -self.obj[self.width() - 1].clone()
    }

    /// Fixes at zero every nonbasic column whose reduced cost is positive.
    pub fn restrict_to_optimal_face(&mut self) {
        for j in 0..self.n {
            if self.obj[j].is_positive() && !self.basis.contains(&j) {
                self.allowed[j] = false;
            }
        }
    }

    pub fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        let last = self.width() - 1;
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rows[i][last].clone();
            }
        }
        x
    }

    fn optimize(&mut self) -> Status {
        let last = self.width() - 1;
        loop {
            let entering = (0..last).find(|&j| self.allowed[j] && self.obj[j].is_negative());
            let Some(j) = entering else {
                return Status::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[last] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return Status::Unbounded,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }
}
