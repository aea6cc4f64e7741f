use dessin_core::algebra::int;
use dessin_core::virasoro::{Strategy as Elimination, VirasoroEngine};
use proptest::prelude::*;

/// A multiset of positive parts with sum at most `max_sum`.
fn parts(max_sum: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=max_sum, 1..=max_sum as usize).prop_map(move |mut v| {
        let mut total = 0;
        v.retain(|&a| {
            total += a;
            total <= max_sum
        });
        if v.is_empty() {
            v.push(1);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elimination_order_is_irrelevant(g in 0u32..=2, a in parts(12)) {
        let x = VirasoroEngine::with_strategy(Elimination::Largest).raw(g, &a);
        let y = VirasoroEngine::with_strategy(Elimination::Smallest).raw(g, &a);
        prop_assert_eq!(x, y);
    }

    #[test]
    fn degree_divisibility_and_symmetry(g in 0u32..=3, a in parts(14)) {
        let d = VirasoroEngine::new().raw(g, &a);
        let sum: i32 = a.iter().map(|&x| x as i32).sum();
        let degree = sum - a.len() as i32 + 2 - 2 * g as i32;
        for (e, _) in d.terms() {
            prop_assert_eq!(e[0], sum);
            prop_assert_eq!(e[1] + e[2], degree);
            prop_assert!(e[1] >= 1 && e[2] >= 1);
        }
        prop_assert_eq!(d.swap_symbols(1, 2), d);
    }

    #[test]
    fn one_point_vanishes_above_the_genus_bound(n in 1u32..=14, extra in 1u32..=3) {
        let g = (n - 1) / 2 + extra;
        prop_assert!(VirasoroEngine::new().raw(g, &[n]).is_zero());
    }

    #[test]
    fn weighting_is_the_product_of_parts(g in 0u32..=1, a in parts(8)) {
        let mut e = VirasoroEngine::new();
        let w: i64 = a.iter().map(|&x| x as i64).product();
        prop_assert_eq!(e.weighted(g, &a), e.raw(g, &a).scale(&int(w)));
    }
}
