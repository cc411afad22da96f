use docit2_core::elicitation::{
    assemble, build_t1_side, cards_from_values, enumerate_chains, envelope_it2, nonnormalized_values,
    normalize, ratio_table, tuple_to_cards, uniform_breakpoints, weights_from_cards, CardChain, CardGap,
    CoreSupport, ElicitationError, Side, DEFAULT_ENUMERATION_CAP,
};
use docit2_core::fuzzy::{Interval, PiecewiseMF};
use docit2_core::rational::{self, int, ratio, Rational};
use docit2_core::ratio::{check_multiplicative, check_reference_independence, memberships_from_ratios, ratios_from_memberships};
use num_traits::pow;
use proptest::prelude::*;

fn exact_chain(gaps: &[u32]) -> CardChain {
    CardChain::anonymous(gaps.iter().map(|&g| CardGap::Exact(g)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn card_weights_sum_to_one(gaps in prop::collection::vec(0u32..6, 1..7), zero in any::<bool>()) {
        let w = weights_from_cards(&exact_chain(&gaps), zero).unwrap();
        prop_assert_eq!(w.iter().fold(int(0), |a, b| a + b), int(1));
        prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        prop_assert_eq!(w[0] == int(0), zero);
    }

    #[test]
    fn cards_round_trip_through_values(gaps in prop::collection::vec(0u32..6, 1..6)) {
        let values = nonnormalized_values(&exact_chain(&gaps)).unwrap();
        let total: u64 = gaps.iter().map(|&g| g as u64 + 1).sum();
        let fit = cards_from_values(&values, total).unwrap();
        prop_assert_eq!(fit.objective, int(0));
        // the smallest proportional chain is found
        let back = normalize(&nonnormalized_values(&exact_chain(&fit.gaps)).unwrap()).unwrap();
        prop_assert_eq!(back, normalize(&values).unwrap());
        prop_assert!(fit.total <= total);
    }

    #[test]
    fn ratio_table_is_multiplicative(gaps in prop::collection::vec(0u32..6, 2..6)) {
        let t = ratio_table(&nonnormalized_values(&exact_chain(&gaps)).unwrap()).unwrap();
        for e in &t.entries {
            for f in &t.entries {
                if f.r == e.s {
                    prop_assert_eq!(t.get(f.s, e.r).unwrap(), &(&e.value * &f.value));
                }
            }
        }
    }

    #[test]
    fn tuple_to_cards_error_bound(
        nums in prop::collection::btree_set(1i64..9999, 1..8),
        m in 1u32..=3,
    ) {
        let x: Vec<Rational> = std::iter::once(int(0))
            .chain(nums.iter().map(|&n| ratio(n, 10_000)))
            .chain(std::iter::once(int(1)))
            .collect();
        let scale = pow(10u64, m as usize);
        match tuple_to_cards(&x, m) {
            Ok(c) => {
                prop_assert_eq!(c.iter().sum::<u64>(), scale);
                let mut acc = 0u64;
                for (i, ci) in c.iter().enumerate() {
                    acc += ci;
                    let err = &x[i + 1] - ratio(acc as i64, scale as i64);
                    prop_assert!(err >= int(0) && err < ratio(1, scale as i64));
                }
            }
            Err(ElicitationError::NeedsLargerM { .. }) => {
                let s = int(scale as i64);
                let floors: Vec<Rational> = x.iter().map(|v| (v * &s).floor()).collect();
                prop_assert!(floors.windows(2).any(|w| w[0] >= w[1]));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn ratios_of_memberships_are_consistent(mu in prop::collection::vec(0.05..1.0f64, 2..6)) {
        let mut named: Vec<(String, f64)> = mu.iter().enumerate().map(|(i, &m)| (format!("a{i}"), m)).collect();
        named[0].1 = 1.0;
        let r = ratios_from_memberships(&named);
        prop_assert!(check_reference_independence(&r).unwrap().is_empty());
        prop_assert!(check_multiplicative(&r, 1e-9).unwrap().is_empty());
        for (name, m) in memberships_from_ratios(&r, "a1").unwrap() {
            let want = named.iter().find(|(n, _)| *n == name).unwrap().1;
            prop_assert!((m - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn envelope_contains_every_member(
        lo in 0u32..4,
        width in 0u32..4,
        fixed in 0u32..3,
    ) {
        let chain = CardChain::anonymous(vec![CardGap::Exact(fixed), CardGap::interval(lo, lo + width).unwrap(), CardGap::Exact(1)]).unwrap();
        let cs = CoreSupport::new(Interval::new(0.0, 1.0).unwrap(), Interval::new(0.45, 0.55).unwrap()).unwrap();
        let left = build_t1_side(&[0.0, 1.0], &[0.0, 0.45], Side::Left, &cs).unwrap();
        let bp = uniform_breakpoints(4, Side::Right, &cs);
        let family: Vec<PiecewiseMF> = enumerate_chains(&chain, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .iter()
            .map(|c| {
                let v: Vec<f64> = normalize(&nonnormalized_values(c).unwrap()).unwrap().iter().map(rational::to_f64).collect();
                assemble(&left, &build_t1_side(&v, &bp, Side::Right, &cs).unwrap()).unwrap()
            })
            .collect();
        prop_assert_eq!(family.len(), width as usize + 1);
        let e = envelope_it2(&family).unwrap();
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let (l, u) = e.evaluate(x);
            let vals: Vec<f64> = family.iter().map(|m| m.evaluate(x)).collect();
            let (mn, mx) = vals.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
            prop_assert!(l <= mn + 1e-12 && mx <= u + 1e-12, "x = {x}");
            prop_assert!((l - mn).abs() <= 1e-12 && (u - mx).abs() <= 1e-12, "x = {x}");
        }
    }
}

#[test]
fn footnote_weights() {
    let chain = CardChain::new(
        vec!["g4".into(), "g3".into(), "g2".into(), "g1".into()],
        vec![CardGap::Exact(0), CardGap::Exact(2), CardGap::Exact(1)],
    )
    .unwrap();
    let w = weights_from_cards(&chain, true).unwrap();
    assert_eq!(w, vec![int(0), ratio(1, 11), ratio(4, 11), ratio(6, 11)]);
}
