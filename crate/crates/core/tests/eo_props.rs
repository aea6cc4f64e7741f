use dessin_core::eo::{verify_main_theorem, EoEngine};
use proptest::prelude::*;

/// Stable `(g, n)` with `2g - 2 + n <= 4`.
fn stable() -> impl Strategy<Value = (u32, usize)> {
    prop::sample::select(vec![(0, 3), (0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn forms_are_even_symmetric_and_s_free((g, n) in stable()) {
        let w = EoEngine::new().omega(g, n).unwrap();
        prop_assert!(w.is_even());
        prop_assert!(w.is_symmetric());
        prop_assert!(w.is_s_free());
    }

    #[test]
    fn swapping_charts_exchanges_alpha_and_beta((g, n) in stable()) {
        let w = EoEngine::new().omega(g, n).unwrap();
        let d = EoEngine::swapped().omega(g, n).unwrap();
        prop_assert_eq!(w.chart_dual(), d.clone());
        prop_assert_eq!(w.swap_alpha_beta(), d);
    }
}

#[test]
fn main_theorem_beyond_the_acceptance_list() {
    for (g, n) in [(1, 3), (2, 2), (0, 6)] {
        let r = verify_main_theorem(g, n, 12);
        assert!(r.passed(), "{}", r.summary_line());
    }
}
