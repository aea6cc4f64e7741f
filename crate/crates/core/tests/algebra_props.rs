use dessin_core::algebra::{rat, residue_coefficient, Alphabet, Exponents, LaurentPolynomial, TruncatedSeries};
use proptest::prelude::*;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn poly_over(size: usize, lo: i32, hi: i32) -> impl Strategy<Value = LaurentPolynomial> {
    let term = (prop::collection::vec(lo..=hi, size), -9i64..=9, 1i64..=5);
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let al = Alphabet::new(&NAMES[..size]);
        let mut p = LaurentPolynomial::zero(&al);
        for (e, n, d) in terms {
            p.add_term(Exponents::from_vec(e), rat(n, d));
        }
        p
    })
}

fn triple() -> impl Strategy<Value = (LaurentPolynomial, LaurentPolynomial, LaurentPolynomial)> {
    (1usize..=4).prop_flat_map(|k| (poly_over(k, -5, 5), poly_over(k, -5, 5), poly_over(k, -5, 5)))
}

/// Unit-constant series in `t` over `[a, b]`.
fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    (1i32..=6).prop_flat_map(|order| {
        prop::collection::vec(poly_over(2, 0, 2), order as usize).prop_map(move |tail| {
            let al = Alphabet::new(&NAMES[..2]);
            let mut coeffs = vec![LaurentPolynomial::one(&al)];
            coeffs.extend(tail);
            TruncatedSeries::new("t", &al, 0, order, coeffs)
        })
    })
}

fn laurent_series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(poly_over(2, 0, 2), 7).prop_map(|c| TruncatedSeries::new("t", &Alphabet::new(&NAMES[..2]), -3, 3, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws((p, q, r) in triple()) {
        prop_assert_eq!((&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!((&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p - &p, LaurentPolynomial::zero(p.alphabet()));
    }

    #[test]
    fn sqrt_squares_back(f in unit_series()) {
        let h = f.sqrt().unwrap();
        prop_assert!(h.mul(&h).unwrap().agrees_with(&f));
    }

    #[test]
    fn inverse_multiplies_to_one(f in unit_series()) {
        let one = TruncatedSeries::one("t", f.alphabet(), f.order());
        prop_assert!(f.invert().unwrap().mul(&f).unwrap().agrees_with(&one));
    }

    #[test]
    fn residue_is_linear(f in laurent_series(), g in laurent_series(), x in -9i64..=9, y in -9i64..=9) {
        let (x, y) = (rat(x, 2), rat(y, 3));
        let lhs = residue_coefficient(&f.scale(&x).add(&g.scale(&y)).unwrap()).unwrap();
        let rhs = residue_coefficient(&f).unwrap().scale(&x) + residue_coefficient(&g).unwrap().scale(&y);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn square_root_substitution_is_a_homomorphism(m in poly_over(2, 0, 4), n in poly_over(2, 0, 4)) {
        // reinterpret [a, b] as [u, v]
        let uv = Alphabet::new(&["u", "v"]);
        let (m, n) = (m.remap(&uv, &[0, 1]), n.remap(&uv, &[0, 1]));
        let ab = Alphabet::new(&["a", "b"]);
        let sub = |p: &LaurentPolynomial| {
            p.substitute("u", &LaurentPolynomial::var_pow(&ab, "a", 2))
                .and_then(|h| h.substitute("v", &LaurentPolynomial::var_pow(&ab, "b", 2)))
                .unwrap()
                .with_alphabet(&uv.merge(&ab))
                .unwrap()
        };
        prop_assert_eq!(sub(&(&m + &n)), &sub(&m) + &sub(&n));
        prop_assert_eq!(sub(&(&m * &n)), &sub(&m) * &sub(&n));
    }
}
