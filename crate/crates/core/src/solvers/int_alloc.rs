use num_traits::{Signed, Zero};

use super::SolverError;
use crate::rational::{self, Rational};

/// Split `total` into integer shares `>= 1` as close as possible (in L1) to
/// `targets`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntAllocProblem {
    pub targets: Vec<Rational>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntAllocation {
    pub shares: Vec<u64>,
    pub objective: Rational,
}

/// Optimal allocation; ties go to the lexicographically smallest share vector.
///
/// The objective is separable convex in integer shares under a sum
/// constraint, so a point where no single-unit transfer improves it is a
/// global optimum. Transfers that keep the objective and move a unit from an
/// earlier slot to a later one then reach the lexicographic minimum of the
/// optimal set.
pub fn solve_int_alloc(p: &IntAllocProblem) -> Result<IntAllocation, SolverError> {
    let n = p.targets.len();
    if n == 0 {
        return Err(SolverError::Domain("no slots to allocate".into()));
    }
    if p.total < n as u64 {
        return Err(SolverError::Domain(format!(
            "total {} is smaller than the number of slots {n}",
            p.total
        )));
    }
    let t = &p.targets;

    // largest-remainder start with every share at least one
    let mut shares: Vec<u64> = t
        .iter()
        .map(|x| rational::floor_to_i64(x).unwrap_or(0).max(1) as u64)
        .collect();
    let mut sum: u64 = shares.iter().sum();
    while sum < p.total {
        let i = best_by(n, |i| gain_add(&shares, t, i), |_| true);
        shares[i] += 1;
        sum += 1;
    }
    while sum > p.total {
        let i = best_by(n, |i| gain_remove(&shares, t, i), |i| shares[i] > 1);
        shares[i] -= 1;
        sum -= 1;
    }

    // improving transfers until none is left
    loop {
        let mut best: Option<(Rational, usize, usize)> = None;
        for i in 0..n {
            if shares[i] <= 1 {
                continue;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = transfer_delta(&shares, t, i, j);
                if d.is_negative() && best.as_ref().map_or(true, |(b, _, _)| d < *b) {
                    best = Some((d, i, j));
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                shares[i] -= 1;
                shares[j] += 1;
            }
            None => break,
        }
    }

    // neutral transfers towards later slots
    'outer: loop {
        for i in 0..n {
            if shares[i] <= 1 {
                continue;
            }
            for j in i + 1..n {
                if !transfer_delta(&shares, t, i, j).is_positive() {
                    shares[i] -= 1;
                    shares[j] += 1;
                    continue 'outer;
                }
            }
        }
        break;
    }

    let objective = objective(&shares, t);
    Ok(IntAllocation { shares, objective })
}

pub(crate) fn objective(shares: &[u64], targets: &[Rational]) -> Rational {
    shares
        .iter()
        .zip(targets)
        .map(|(&s, t)| dev(s, t))
        .fold(Rational::zero(), |a, b| a + b)
}

fn dev(s: u64, t: &Rational) -> Rational {
    (rational::int(s as i64) - t).abs()
}

fn gain_add(shares: &[u64], t: &[Rational], i: usize) -> Rational {
    dev(shares[i], &t[i]) - dev(shares[i] + 1, &t[i])
}

fn gain_remove(shares: &[u64], t: &[Rational], i: usize) -> Rational {
    dev(shares[i], &t[i]) - dev(shares[i] - 1, &t[i])
}

fn transfer_delta(shares: &[u64], t: &[Rational], i: usize, j: usize) -> Rational {
    dev(shares[i] - 1, &t[i]) - dev(shares[i], &t[i]) + dev(shares[j] + 1, &t[j])
        - dev(shares[j], &t[j])
}

/// Index with the largest gain among the allowed ones; first index on ties.
fn best_by(
    n: usize,
    gain: impl Fn(usize) -> Rational,
    allowed: impl Fn(usize) -> bool,
) -> usize {
    let mut best: Option<(Rational, usize)> = None;
    for i in (0..n).filter(|&i| allowed(i)) {
        let g = gain(i);
        if best.as_ref().map_or(true, |(b, _)| g > *b) {
            best = Some((g, i));
        }
    }
    best.expect("an allowed slot exists").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn solve(targets: Vec<Rational>, total: u64) -> Vec<u64> {
        solve_int_alloc(&IntAllocProblem { targets, total }).unwrap().shares
    }

    #[test]
    fn exact_fit() {
        assert_eq!(solve(vec![int(2), int(5)], 7), vec![2, 5]);
    }

    #[test]
    fn symmetric_tie_is_lexicographic() {
        assert_eq!(solve(vec![ratio(3, 2), ratio(3, 2)], 3), vec![1, 2]);
    }

    #[test]
    fn minimum_share_is_one() {
        assert_eq!(solve(vec![ratio(1, 10), ratio(49, 10)], 5), vec![1, 4]);
        assert_eq!(solve(vec![int(0), int(0), int(0)], 3), vec![1, 1, 1]);
    }

    #[test]
    fn total_below_slots() {
        let p = IntAllocProblem { targets: vec![int(1), int(1)], total: 1 };
        assert!(matches!(solve_int_alloc(&p), Err(SolverError::Domain(_))));
        let p = IntAllocProblem { targets: vec![], total: 1 };
        assert!(matches!(solve_int_alloc(&p), Err(SolverError::Domain(_))));
    }
}
