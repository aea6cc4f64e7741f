//! Exhaustive law checks over fixed ranges, and seeded random checks of the algebra layer.
//! Each returns a report so the acceptance target and `verify` share one implementation.

use std::time::Instant;

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::{rat, residue_coefficient, Alphabet, Exponents, LaurentPolynomial, Rational, TruncatedSeries};
use crate::eo::{EoEngine, EOForm};
use crate::report::VerificationReport;
use crate::virasoro::{Strategy, VirasoroEngine};

/// Nonincreasing partitions with `1 <= Σ <= max_sum`.
pub fn partitions(max_sum: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for a in (1..=cap.min(rest)).rev() {
            cur.push(a);
            go(rest - a, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_sum, max_sum, &mut Vec::new(), &mut out);
    out.sort_by_key(|p| (p.iter().sum::<u32>(), p.len()));
    out
}

fn label(g: u32, parts: &[u32]) -> String {
    format!("g={g} parts={parts:?}")
}

/// Both elimination strategies give identical bare correlators.
pub fn strategy_independence(max_sum: u32, max_genus: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("properties", "strategy-independence", max_sum)
        .param("max_sum", max_sum)
        .param("max_genus", max_genus);
    let mut big = VirasoroEngine::with_strategy(Strategy::Largest);
    let mut small = VirasoroEngine::with_strategy(Strategy::Smallest);
    for g in 0..=max_genus {
        for parts in partitions(max_sum) {
            let (x, y) = (big.raw(g, &parts), small.raw(g, &parts));
            report.check(|| label(g, &parts), &x.to_string(), &y.to_string());
        }
    }
    report.timed(start)
}

/// s-degree, total degree, uv-divisibility and u↔v symmetry of every nonzero `D_g(A)`.
pub fn virasoro_laws(max_sum: u32, max_genus: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("properties", "virasoro-laws", max_sum)
        .param("max_sum", max_sum)
        .param("max_genus", max_genus);
    let mut e = VirasoroEngine::new();
    for g in 0..=max_genus {
        for parts in partitions(max_sum) {
            let d = e.raw(g, &parts);
            if d.is_zero() {
                continue;
            }
            let sum: i32 = parts.iter().map(|&a| a as i32).sum();
            let degree = sum - parts.len() as i32 + 2 - 2 * g as i32;
            let mut s_ok = true;
            let mut deg_ok = true;
            let mut uv_ok = true;
            for (ex, _) in d.terms() {
                s_ok &= ex[0] == sum;
                deg_ok &= ex[1] + ex[2] == degree;
                uv_ok &= ex[1] >= 1 && ex[2] >= 1;
            }
            report.check(|| format!("s-degree {}", label(g, &parts)), "true", &s_ok.to_string());
            report.check(|| format!("total-degree {}", label(g, &parts)), "true", &deg_ok.to_string());
            report.check(|| format!("uv-divisible {}", label(g, &parts)), "true", &uv_ok.to_string());
            let swapped = d.swap_symbols(1, 2);
            report.check(|| format!("u<->v {}", label(g, &parts)), &d.to_string(), &swapped.to_string());
        }
    }
    report.timed(start)
}

/// `D_g({n}) = 0` whenever `2g > n - 1`.
pub fn vanishing_bound(max_n: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("properties", "vanishing-bound", max_n).param("max_n", max_n);
    let mut e = VirasoroEngine::new();
    for n in 1..=max_n {
        for g in ((n - 1) / 2 + 1)..=((n + 1) / 2 + 1) {
            let d = e.raw(g, &[n]);
            report.check(|| label(g, &[n]), "0", &d.to_string());
        }
    }
    report.timed(start)
}

fn all_permutations_fix(form: &EOForm) -> bool {
    let slots: Vec<usize> = (2..2 + form.n).collect();
    (0..form.n).permutations(form.n).all(|perm| form.poly.permute_symbols(&slots, &perm) == form.poly)
}

/// Evenness, full permutation symmetry, s-freeness and chart consistency for every
/// stable `(g, n)` with `2g - 2 + n <= max_euler`.
pub fn eo_laws(max_euler: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("properties", "eo-laws", max_euler).param("max_euler", max_euler);
    let mut eo = EoEngine::new();
    let mut dual = EoEngine::swapped();
    for g in 0..=(max_euler + 2) / 2 {
        for n in 1..=(max_euler + 2 - 2 * g) as usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let at = |what: &str| format!("{what} w_{{{g},{n}}}");
            let (w, d) = match (eo.omega(g, n), dual.omega(g, n)) {
                (Ok(w), Ok(d)) => (w, d),
                (Err(e), _) | (_, Err(e)) => {
                    report.fail(at("compute"), "form", &e.to_string());
                    continue;
                }
            };
            report.check(|| at("even"), "true", &w.is_even().to_string());
            report.check(|| at("symmetric"), "true", &all_permutations_fix(&w).to_string());
            report.check(|| at("s-free"), "true", &w.is_s_free().to_string());
            report.check(|| at("chart"), &w.chart_dual().poly.to_string(), &d.poly.to_string());
            report.check(|| at("alpha<->beta"), &w.swap_alpha_beta().poly.to_string(), &d.poly.to_string());
        }
    }
    report.timed(start)
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_alphabet(rng: &mut StdRng) -> Alphabet {
    let k = rng.gen_range(1..=4);
    Alphabet::new(&NAMES[..k])
}

fn random_rational(rng: &mut StdRng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn random_poly(rng: &mut StdRng, al: &Alphabet, lo: i32, hi: i32) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero(al);
    for _ in 0..rng.gen_range(0..=5) {
        let e: Exponents = (0..al.len()).map(|_| rng.gen_range(lo..=hi)).collect();
        p.add_term(e, random_rational(rng));
    }
    p
}

fn random_series(rng: &mut StdRng, al: &Alphabet, min_exp: i32, order: i32, unit: bool) -> TruncatedSeries {
    let mut coeffs: Vec<LaurentPolynomial> =
        (min_exp..=order).map(|_| random_poly(rng, al, 0, 2)).collect();
    if unit {
        coeffs[0] = LaurentPolynomial::one(al);
    }
    TruncatedSeries::new("t", al, min_exp, order, coeffs)
}

/// Ring laws, square roots, inverses, residue linearity and the `u -> a^2`, `v -> b^2`
/// substitution homomorphism on `cases` random inputs each.
pub fn random_algebra(cases: u32, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("properties", "random-algebra", cases)
        .param("cases", cases)
        .param("seed", seed);
    let mut rng = StdRng::seed_from_u64(seed);
    for case in 0..cases {
        let al = random_alphabet(&mut rng);
        let (p, q, r) = (
            random_poly(&mut rng, &al, -5, 5),
            random_poly(&mut rng, &al, -5, 5),
            random_poly(&mut rng, &al, -5, 5),
        );
        let at = |what: &str| format!("{what} case {case}");
        report.check(|| at("associativity"), &((&p + &q) + &r).to_string(), &(&p + &(&q + &r)).to_string());
        report.check(|| at("commutativity"), &(&p * &q).to_string(), &(&q * &p).to_string());
        report.check(|| at("distributivity"), &(&p * &(&q + &r)).to_string(), &(&(&p * &q) + &(&p * &r)).to_string());

        let sal = Alphabet::new(&NAMES[..2]);
        let order = rng.gen_range(1..=6);
        let f = random_series(&mut rng, &sal, 0, order, true);
        let one = TruncatedSeries::one("t", &sal, order);
        match f.sqrt().and_then(|h| h.mul(&h)) {
            Ok(sq) => report.check(|| at("sqrt^2"), "true", &sq.agrees_with(&f).to_string()),
            Err(e) => report.check(|| at("sqrt^2"), "ok", &e.to_string()),
        };
        match f.invert().and_then(|h| h.mul(&f)) {
            Ok(prod) => report.check(|| at("invert"), "true", &prod.agrees_with(&one).to_string()),
            Err(e) => report.check(|| at("invert"), "ok", &e.to_string()),
        };

        let (f1, f2) = (random_series(&mut rng, &sal, -3, 3, false), random_series(&mut rng, &sal, -3, 3, false));
        let (x, y) = (random_rational(&mut rng), random_rational(&mut rng));
        let lhs = f1.scale(&x).add(&f2.scale(&y)).and_then(|h| residue_coefficient(&h));
        let rhs = residue_coefficient(&f1).and_then(|a| Ok(a.scale(&x) + residue_coefficient(&f2)?.scale(&y)));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check(|| at("residue-linearity"), &r.to_string(), &l.to_string()),
            (Err(e), _) | (_, Err(e)) => report.check(|| at("residue-linearity"), "ok", &e.to_string()),
        };

        let uv = Alphabet::new(&["u", "v", "s"]);
        let (m, n) = (random_poly(&mut rng, &uv, 0, 4), random_poly(&mut rng, &uv, 0, 4));
        let sub = |p: &LaurentPolynomial| -> LaurentPolynomial {
            let ab = uv.with("a").with("b");
            let a2 = LaurentPolynomial::var_pow(&ab, "a", 2);
            let b2 = LaurentPolynomial::var_pow(&ab, "b", 2);
            p.substitute("u", &a2).and_then(|h| h.substitute("v", &b2)).expect("known symbols")
        };
        report.check(|| at("substitution+"), &(&sub(&m) + &sub(&n)).to_string(), &sub(&(&m + &n)).to_string());
        report.check(|| at("substitution*"), &(&sub(&m) * &sub(&n)).to_string(), &sub(&(&m * &n)).to_string());
    }
    report.timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        // p(1..=5) = 1, 2, 3, 5, 7
        assert_eq!(partitions(5).len(), 18);
        assert!(partitions(6).iter().all(|p| p.windows(2).all(|w| w[0] >= w[1])));
    }

    #[test]
    fn small_ranges_pass() {
        for r in [strategy_independence(6, 1), virasoro_laws(6, 1), vanishing_bound(6), eo_laws(2), random_algebra(10, 7)] {
            assert!(r.passed() && r.checked_count > 0, "{}", r.summary_line());
        }
    }

    #[test]
    fn random_suite_is_seed_deterministic() {
        let a = random_algebra(5, 11);
        let b = random_algebra(5, 11);
        assert_eq!(a.checked_count, b.checked_count);
        assert_eq!(a.first_discrepancy, b.first_discrepancy);
    }
}
