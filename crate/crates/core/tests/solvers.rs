use docit2_core::rational::{self, int, ratio, Rational};
use docit2_core::solvers::{solve_abs_lp, solve_int_alloc, AbsTerm, IntAllocProblem, LpProblem};
use proptest::prelude::*;

fn l1(shares: &[u64], targets: &[Rational]) -> Rational {
    shares.iter().zip(targets).map(|(&s, t)| rational::abs(&(int(s as i64) - t))).sum()
}

/// Every split of `total` into positive parts, in lexicographic order.
fn compositions(total: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 1..=total - (parts as u64 - 1) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn allocation_matches_exhaustive_search(
        nums in prop::collection::vec(0i64..400, 1..=6),
        den in 1i64..12,
        extra in 0u64..24,
    ) {
        let k = nums.len();
        let total = (k as u64 + extra).min(30);
        let targets: Vec<Rational> = nums.iter().map(|&n| ratio(n, den)).collect();
        let got = solve_int_alloc(&IntAllocProblem { targets: targets.clone(), total }).unwrap();
        let mut all = Vec::new();
        compositions(total, k, &mut Vec::new(), &mut all);
        let best = all.iter().min_by_key(|s| l1(s, &targets)).unwrap();
        prop_assert_eq!(&got.objective, &l1(best, &targets));
        prop_assert_eq!(&got.shares, best);
    }

    #[test]
    fn consistent_ratio_systems_have_zero_objective(
        vals in prop::collection::vec(1i64..50, 2..=5),
    ) {
        // terms x_s = (v_s / v_r) x_r for every pair
        let n = vals.len();
        let mut terms = Vec::new();
        for r in 0..n {
            for s in r + 1..n {
                terms.push(AbsTerm { target: s, coef: ratio(vals[s], vals[r]), source: r });
            }
        }
        let sol = solve_abs_lp(&LpProblem { lower_bounds: vec![int(1); n], terms, constraints: vec![] }).unwrap();
        prop_assert_eq!(sol.objective, int(0));
        let min = *vals.iter().min().unwrap();
        for (x, v) in sol.values.iter().zip(&vals) {
            prop_assert_eq!(x, &ratio(*v, min));
        }
    }

    #[test]
    fn lp_objective_matches_grid_search(
        exps in prop::collection::vec(-2i32..=2, 3),
    ) {
        // p = 4 table a32, a42, a43 with power-of-two ratios; optimal
        // vertices are dyadic with denominators up to 16 and lie in [1, 16]
        let a = |e: i32| if e >= 0 { int(1 << e) } else { ratio(1, 1 << -e) };
        let terms = vec![
            AbsTerm { target: 1, coef: a(exps[0]), source: 0 },
            AbsTerm { target: 2, coef: a(exps[1]), source: 0 },
            AbsTerm { target: 2, coef: a(exps[2]), source: 1 },
        ];
        let sol = solve_abs_lp(&LpProblem { lower_bounds: vec![int(1); 3], terms: terms.clone(), constraints: vec![] }).unwrap();
        let f = |v: [f64; 3]| -> f64 {
            terms.iter().map(|t| (v[t.target] - rational::to_f64(&t.coef) * v[t.source]).abs()).sum()
        };
        let mut best = f64::INFINITY;
        let grid: Vec<f64> = (16..=256).map(|k| k as f64 / 16.0).collect();
        for fixed in 0..3 {
            for &u in &grid {
                for &w in &grid {
                    let mut v = [1.0; 3];
                    let (i, j) = ((fixed + 1) % 3, (fixed + 2) % 3);
                    v[i] = u;
                    v[j] = w;
                    best = best.min(f(v));
                }
            }
        }
        prop_assert!((rational::to_f64(&sol.objective) - best).abs() <= 1e-6);
        let v: Vec<f64> = sol.values.iter().map(rational::to_f64).collect();
        prop_assert!((f([v[0], v[1], v[2]]) - best).abs() <= 1e-6);
    }
}
