mod common;

use std::cmp::Ordering;

use common::{it2, probe_points, t1};
use docit2_core::fuzzy::{add, PiecewiseMF};
use docit2_core::fuzzy::AlphaLevels;
use docit2_core::it2::{it2_add, it2_order_1, it2_order_2, t1_admissible_order, t1_keys, IT2MF};
use proptest::prelude::*;

fn same_function(a: &PiecewiseMF, b: &PiecewiseMF) -> bool {
    probe_points(&[a, b]).into_iter().all(|x| {
        let (ka, kb) = (a.knots(), b.knots());
        (ka.left_limit(x) - kb.left_limit(x)).abs() <= 1e-12
            && (ka.value(x) - kb.value(x)).abs() <= 1e-12
            && (ka.right_limit(x) - kb.right_limit(x)).abs() <= 1e-12
    })
}

fn nonneg_shift() -> impl Strategy<Value = PiecewiseMF> {
    (0.0..0.5f64, 0.0..0.5f64, 0.0..0.5f64, 0.0..0.5f64).prop_map(|(a, b, c, d)| {
        PiecewiseMF::trapezoidal(a, a + b, a + b + c, a + b + c + d).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn t1_order_is_a_total_order(a in t1(), b in t1(), c in t1()) {
        prop_assert_eq!(t1_admissible_order(&a, &a), Ordering::Equal);
        let ab = t1_admissible_order(&a, &b);
        prop_assert_eq!(ab, t1_admissible_order(&b, &a).reverse());
        if ab == Ordering::Equal {
            prop_assert!(same_function(&a, &b));
        }
        let bc = t1_admissible_order(&b, &c);
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(t1_admissible_order(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn t1_order_refines_dominance(a in t1(), d in nonneg_shift()) {
        let b = add(&a, &d);
        prop_assert_ne!(t1_admissible_order(&a, &b), Ordering::Greater);
    }

    #[test]
    fn it2_orders_are_total_orders(a in it2(), b in it2(), c in it2()) {
        for cmp in [it2_order_1 as fn(&IT2MF, &IT2MF) -> Ordering, it2_order_2] {
            prop_assert_eq!(cmp(&a, &a), Ordering::Equal);
            let ab = cmp(&a, &b);
            prop_assert_eq!(ab, cmp(&b, &a).reverse());
            if ab == Ordering::Equal {
                prop_assert!(same_function(a.lower(), b.lower()) && same_function(a.upper(), b.upper()));
            }
            if ab != Ordering::Greater && cmp(&b, &c) != Ordering::Greater {
                prop_assert_ne!(cmp(&a, &c), Ordering::Greater);
            }
        }
    }

    #[test]
    fn it2_orders_refine_dominance(a in it2(), d in nonneg_shift()) {
        let b = it2_add(&a, &IT2MF::degenerate(d));
        prop_assert_ne!(it2_order_1(&a, &b), Ordering::Greater);
        prop_assert_ne!(it2_order_2(&a, &b), Ordering::Greater);
    }

    #[test]
    fn redundant_levels_do_not_change_the_order(a in t1(), b in t1()) {
        let zero = PiecewiseMF::point(0.0).unwrap();
        let refined = add(&a, &add(&zero, &PiecewiseMF::from_cuts(&[(0.0, 0.0, 0.0), (0.37, 0.0, 0.0), (1.0, 0.0, 0.0)]).unwrap()));
        prop_assert_eq!(t1_admissible_order(&refined, &b), t1_admissible_order(&a, &b));
    }

    #[test]
    fn refined_copies_compare_equal(a in t1(), alpha in 0.01..0.99f64) {
        let levels = AlphaLevels::from_unsorted([0.0, alpha, 1.0]).unwrap();
        let refined = a.refine(&levels);
        prop_assert_eq!(t1_admissible_order(&refined, &a), Ordering::Equal);
        let it2 = IT2MF::degenerate(a.clone());
        let copy = IT2MF::degenerate(refined);
        prop_assert_eq!(it2_order_1(&copy, &it2), Ordering::Equal);
    }

    #[test]
    fn floating_filter_agrees_with_exact_keys(a in t1(), b in t1()) {
        let (ka, kb) = (t1_keys(&a), t1_keys(&b));
        if ka.midpoint_integral != kb.midpoint_integral {
            prop_assert_eq!(t1_admissible_order(&a, &b), ka.midpoint_integral.cmp(&kb.midpoint_integral));
        }
    }
}
