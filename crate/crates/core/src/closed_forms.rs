//! Closed-form generating functions and their coefficient laws.
//!
//! Dessin functions live over `[s, u, v, t1, ..., tn]` with `t_i = 1/x_i`;
//! they are truncated at total t-degree. Every other catalog entry uses its own
//! alphabet and is graded by its coupling (`g0` or `t`).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::One;

use crate::algebra::{
    binomial, double_factorial, factorial, int, rat, AlgebraError, Alphabet, LaurentPolynomial, Rational,
    TruncatedSeries,
};
use crate::npoint::{t_alphabet, t_slots, NPointSeries};
use crate::report::VerificationReport;
use crate::virasoro::VirasoroEngine;

fn bigint_rat(n: num::BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `N(n, k) = C(n,k) C(n,k-1) / n`.
pub fn narayana(n: u32, k: u32) -> Result<Rational, AlgebraError> {
    if n == 0 || k == 0 || k > n {
        return Err(AlgebraError::NotExpressible(format!("narayana needs 1 <= k <= n, got n={n}, k={k}")));
    }
    let (n, k) = (n as i64, k as i64);
    Ok(bigint_rat(binomial(n, k) * binomial(n, k - 1)) / int(n))
}

/// `Σ_k N(n, k) q^k` over the alphabet `[q]`.
pub fn narayana_poly(n: u32) -> LaurentPolynomial {
    let al = Alphabet::new(&["q"]);
    let mut p = LaurentPolynomial::zero(&al);
    for k in 1..=n {
        p.add_term([k as i32].into_iter().collect(), narayana(n, k).unwrap());
    }
    p
}

pub fn catalan(n: u32) -> Rational {
    bigint_rat(binomial(2 * n as i64, n as i64)) / int(n as i64 + 1)
}

/// `s^n uv Σ_k N(n,k) u^{n-k} v^{k-1}` over `[s, u, v]`.
pub fn narayana_one_point(n: u32) -> LaurentPolynomial {
    let al = Alphabet::new(&["s", "u", "v"]);
    let mut p = LaurentPolynomial::zero(&al);
    for k in 1..=n {
        let e = [n as i32, (n - k) as i32 + 1, k as i32];
        p.add_term(e.into_iter().collect(), narayana(n, k).unwrap());
    }
    p
}

/// `Δ(t) = 1 - 2s(u+v)t + s^2(u-v)^2 t^2` in the variable `t1`.
pub fn discriminant() -> LaurentPolynomial {
    let al = t_alphabet(1);
    let v = |n: &str| LaurentPolynomial::var(&al, n);
    let (s, u, w, t) = (v("s"), v("u"), v("v"), v("t1"));
    let lin = (&s * &(&u + &w)) * t.clone();
    let quad = (&(&s * &(&u - &w)) * &t).pow(2);
    LaurentPolynomial::one(&al) - &lin.scale(&int(2)) + quad
}

/// `Δ(t1)^{k/2}` through `t1^order`.
pub fn discriminant_power(k: i32, order: u32) -> Result<LaurentPolynomial, AlgebraError> {
    half_power(&discriminant(), "t1", k, order as i32)
}

/// `p^{k/2}` for a polynomial with constant term 1 in `var`, through `var^order`.
pub fn half_power(p: &LaurentPolynomial, var: &str, k: i32, order: i32) -> Result<LaurentPolynomial, AlgebraError> {
    let series = TruncatedSeries::from_polynomial(var, p, order)?;
    let root = series.sqrt()?;
    root.powi(k)?.truncate(order).to_polynomial(p.alphabet())
}

fn t_var(n: usize, name: &str) -> LaurentPolynomial {
    LaurentPolynomial::var(&t_alphabet(n), name)
}

/// Copies a one-variable function of `t1` into slot `slot` of `[s,u,v,t1..tn]`.
fn place(p: &LaurentPolynomial, n: usize, slot: usize) -> LaurentPolynomial {
    p.remap(&t_alphabet(n), &[0, 1, 2, 2 + slot])
}

/// `G_{0,1} = (1 - s(u+v)t - √Δ)/(2s)` through total degree `order`.
pub fn g01_polynomial(order: u32) -> Result<LaurentPolynomial, AlgebraError> {
    let al = t_alphabet(1);
    let root = discriminant_power(1, order)?;
    let (s, upv, t) = (t_var(1, "s"), t_var(1, "u") + t_var(1, "v"), t_var(1, "t1"));
    let inner = LaurentPolynomial::one(&al) - &(&(&s * &upv) * &t) - &root;
    let half_inv_s = LaurentPolynomial::monomial(&al, &[-1, 0, 0, 0], rat(1, 2));
    Ok(inner * half_inv_s)
}

/// Two-point function: `N/(x1-x2)^2` with
/// `N = (1 - s(u+v)(t1+t2) + s^2(u-v)^2 t1 t2)/(2√(Δ1Δ2)) - 1/2`, divided out exactly.
pub fn g02_polynomial(order: u32) -> Result<LaurentPolynomial, AlgebraError> {
    let al = t_alphabet(2);
    let slots = t_slots(2);
    let inner_order = order.saturating_sub(2) as i32;
    let d = discriminant_power(-1, inner_order as u32)?;
    let (d1, d2) = (place(&d, 2, 1), place(&d, 2, 2));
    let (s, u, v, t1, t2) = (t_var(2, "s"), t_var(2, "u"), t_var(2, "v"), t_var(2, "t1"), t_var(2, "t2"));
    let numer = LaurentPolynomial::one(&al) - &(&(&s * &(&u + &v)) * &(&t1 + &t2))
        + (&(&s * &(&u - &v)).pow(2) * &(&t1 * &t2));
    let prod = d1.mul_truncated(&d2, &slots, inner_order);
    let n = numer.mul_truncated(&prod, &slots, inner_order).scale(&rat(1, 2)) - LaurentPolynomial::constant(&al, rat(1, 2));
    let q = n.divide_by_difference(3, 4)?.divide_by_difference(3, 4)?;
    let g = q * (&t1 * &t2).pow(2);
    // (x1-x2)^2 = (t1-t2)^2/(t1 t2)^2; the quotient must be symmetric
    if g != g.swap_symbols(3, 4) {
        return Err(AlgebraError::NotExpressible("two-point expansion is not symmetric".into()));
    }
    Ok(g.truncate_degree(&slots, order as i32))
}

/// `2s^3uv (1 - (u-v)^2 s^2 e2 + 2(u+v)(u-v)^2 s^3 e3) ∏ t_j^2 Δ_j^{-3/2}`.
pub fn g03_polynomial(order: u32) -> Result<LaurentPolynomial, AlgebraError> {
    let al = t_alphabet(3);
    let slots = t_slots(3);
    let o = order as i32;
    let (s, u, v) = (t_var(3, "s"), t_var(3, "u"), t_var(3, "v"));
    let t: Vec<LaurentPolynomial> = (1..=3).map(|i| t_var(3, &format!("t{i}"))).collect();
    let e2 = &(&(&t[0] * &t[1]) + &(&t[1] * &t[2])) + &(&t[2] * &t[0]);
    let e3 = &(&t[0] * &t[1]) * &t[2];
    let dm2 = (&u - &v).pow(2);
    let bracket = LaurentPolynomial::one(&al) - &(&(&dm2 * &s.pow(2)) * &e2)
        + (&(&(&(&u + &v) * &dm2) * &s.pow(3)) * &e3).scale(&int(2));
    let pre = LaurentPolynomial::monomial(&al, &[3, 1, 1, 2, 2, 2], int(2));
    let d = discriminant_power(-3, order.saturating_sub(6))?;
    let mut acc = bracket.mul_ref(&pre).truncate_degree(&slots, o);
    for slot in 1..=3 {
        acc = acc.mul_truncated(&place(&d, 3, slot), &slots, o);
    }
    Ok(acc)
}

/// `uv s^3 t^4 Δ^{-5/2}`.
pub fn g11_polynomial(order: u32) -> Result<LaurentPolynomial, AlgebraError> {
    let al = t_alphabet(1);
    let pre = LaurentPolynomial::monomial(&al, &[3, 1, 1, 4], int(1));
    let d = discriminant_power(-5, order.saturating_sub(4))?;
    Ok(pre.mul_truncated(&d, &t_slots(1), order as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DessinForm {
    G01,
    G02,
    G03,
    G11,
}

impl DessinForm {
    pub const ALL: [DessinForm; 4] = [DessinForm::G01, DessinForm::G02, DessinForm::G03, DessinForm::G11];

    pub fn genus_points(self) -> (u32, usize) {
        match self {
            DessinForm::G01 => (0, 1),
            DessinForm::G02 => (0, 2),
            DessinForm::G03 => (0, 3),
            DessinForm::G11 => (1, 1),
        }
    }
}

impl FromStr for DessinForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "G01" => Ok(DessinForm::G01),
            "G02" => Ok(DessinForm::G02),
            "G03" => Ok(DessinForm::G03),
            "G11" => Ok(DessinForm::G11),
            _ => Err(format!("unknown series {s:?}; valid: G01, G02, G03, G11")),
        }
    }
}

impl fmt::Display for DessinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn dessin_closed_series(which: DessinForm, order: u32) -> Result<NPointSeries, AlgebraError> {
    let (g, n) = which.genus_points();
    let poly = match which {
        DessinForm::G01 => g01_polynomial(order)?,
        DessinForm::G02 => g02_polynomial(order)?,
        DessinForm::G03 => g03_polynomial(order)?,
        DessinForm::G11 => g11_polynomial(order)?,
    };
    NPointSeries::from_polynomial(g, n, order, &poly)
}

/// Compares monomial by monomial; the first mismatch in exponent order is reported.
pub fn compare_polynomials(report: &mut VerificationReport, expected: &LaurentPolynomial, actual: &LaurentPolynomial) {
    let al = expected.alphabet().merge(actual.alphabet());
    let e = expected.with_alphabet(&al).expect("merged");
    let a = actual.with_alphabet(&al).expect("merged");
    let mut keys: Vec<_> = e.terms().map(|(k, _)| k.clone()).chain(a.terms().map(|(k, _)| k.clone())).collect();
    keys.sort();
    keys.dedup();
    for k in keys {
        let (x, y) = (e.coefficient(&k), a.coefficient(&k));
        let mono = LaurentPolynomial::monomial(&al, &k, Rational::one()).to_text();
        report.check(|| mono, &x.to_string(), &y.to_string());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityName {
    NarayanaGf,
    A132812Gf,
    CentralBinomialGf,
    TypeBGf,
    TypeDGf,
}

impl IdentityName {
    pub const ALL: [IdentityName; 5] = [
        IdentityName::NarayanaGf,
        IdentityName::A132812Gf,
        IdentityName::CentralBinomialGf,
        IdentityName::TypeBGf,
        IdentityName::TypeDGf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::NarayanaGf => "narayana-gf",
            IdentityName::A132812Gf => "a132812-gf",
            IdentityName::CentralBinomialGf => "central-binomial-gf",
            IdentityName::TypeBGf => "typeB-gf",
            IdentityName::TypeDGf => "typeD-gf",
        }
    }
}

impl FromStr for IdentityName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        IdentityName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = IdentityName::ALL.iter().map(|n| n.as_str()).collect();
            format!("unknown identity {s:?}; valid: {}", names.join(", "))
        })
    }
}

fn uvz() -> Alphabet {
    Alphabet::new(&["u", "v", "z"])
}

/// `√(1 - 2(u+v)z + (u-v)^2 z^2)^k` over `[u, v, z]`.
fn uv_root_power(k: i32, order: i32) -> Result<LaurentPolynomial, AlgebraError> {
    let al = uvz();
    let (u, v, z) = (LaurentPolynomial::var(&al, "u"), LaurentPolynomial::var(&al, "v"), LaurentPolynomial::var(&al, "z"));
    let p = LaurentPolynomial::one(&al) - &(&(&u + &v) * &z).scale(&int(2)) + (&(&u - &v) * &z).pow(2);
    half_power(&p, "z", k, order)
}

fn uvz_mono(eu: i64, ev: i64, ez: i64, c: Rational) -> LaurentPolynomial {
    LaurentPolynomial::monomial(&uvz(), &[eu as i32, ev as i32, ez as i32], c)
}

/// `Σ_{n>=1} w(n) z^{n+1} Σ_k C(n,k)C(n,k-1) u^{n+1-k} v^k`.
fn narayana_side(order: i32, weight: impl Fn(i64) -> Rational) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero(&uvz());
    for n in 1..order as i64 {
        for k in 1..=n {
            let c = bigint_rat(binomial(n, k) * binomial(n, k - 1)) * weight(n);
            p = p + uvz_mono(n + 1 - k, k, n + 1, c);
        }
    }
    p
}

fn central_side(order: i32) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero(&uvz());
    for n in 0..=order as i64 {
        for k in 0..=n {
            p = p + uvz_mono(n - k, k, n, bigint_rat(binomial(n, k).pow(2)));
        }
    }
    p
}

/// Expands both sides of a generating-function identity through `order`.
pub fn gf_identity_check(name: IdentityName, order: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("identity", name.as_str(), order);
    if order < 2 {
        return report.skipped("order must be at least 2").timed(start);
    }
    if let Err(e) = run_identity(name, order as i32, &mut report) {
        report.fail("evaluation".into(), "expansion", &e.to_string());
    }
    report.timed(start)
}

fn run_identity(name: IdentityName, o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = uvz();
    let one = LaurentPolynomial::one(&al);
    let (u, v, z) = (LaurentPolynomial::var(&al, "u"), LaurentPolynomial::var(&al, "v"), LaurentPolynomial::var(&al, "z"));
    let zi = [2usize];
    match name {
        IdentityName::NarayanaGf => {
            let lhs = (&one - &(&(&u + &v) * &z) - &uv_root_power(1, o)?).scale(&rat(1, 2));
            compare_polynomials(report, &lhs, &narayana_side(o, |n| rat(1, n)));
        }
        IdentityName::A132812Gf => {
            let lhs = (&one - &(&(&u + &v) * &z)).mul_truncated(&uv_root_power(-1, o)?, &zi, o).scale(&rat(1, 2))
                - one.scale(&rat(1, 2));
            compare_polynomials(report, &lhs, &narayana_side(o, |_| int(1)));
        }
        IdentityName::CentralBinomialGf => {
            compare_polynomials(report, &uv_root_power(-1, o)?, &central_side(o));
            // u = v = 1: Σ_k C(n,k)^2 = C(2n, n)
            let flat = uv_root_power(-1, o)?.evaluate("u", &int(1))?.evaluate("v", &int(1))?;
            let mut central = LaurentPolynomial::zero(&al);
            for n in 0..=o as i64 {
                central = central + uvz_mono(0, 0, n, bigint_rat(binomial(2 * n, n)));
            }
            compare_polynomials(report, &central, &flat);
        }
        IdentityName::TypeBGf => {
            // Σ x^n Σ_k C(n,k)^2 y^k = (1 - 2x - 2xy + x^2 - 2x^2 y + x^2 y^2)^{-1/2}
            let bl = Alphabet::new(&["x", "y"]);
            let (x, y) = (LaurentPolynomial::var(&bl, "x"), LaurentPolynomial::var(&bl, "y"));
            let b1 = LaurentPolynomial::one(&bl);
            let x2 = x.pow(2);
            let q = &b1 - &x.scale(&int(2)) - &(&x * &y).scale(&int(2)) + x2.clone() - (&x2 * &y).scale(&int(2))
                + (&x2 * &y.pow(2));
            let lhs = half_power(&q, "x", -1, o)?;
            let mut rhs = LaurentPolynomial::zero(&bl);
            for n in 0..=o {
                for k in 0..=n {
                    let c = bigint_rat(binomial(n as i64, k as i64).pow(2));
                    rhs = rhs + LaurentPolynomial::monomial(&bl, &[n, k], c);
                }
            }
            compare_polynomials(report, &rhs, &lhs);
            // dessin form: Σ s^n t^{n+1} Σ_k C(n,k)^2 u^{n-k} v^k = t Δ(t)^{-1/2}
            let t1 = t_var(1, "t1");
            let lhs = discriminant_power(-1, o as u32)?.mul_ref(&t1);
            let mut rhs = LaurentPolynomial::zero(&t_alphabet(1));
            for n in 0..o {
                for k in 0..=n {
                    let c = bigint_rat(binomial(n as i64, k as i64).pow(2));
                    rhs = rhs + LaurentPolynomial::monomial(&t_alphabet(1), &[n, n - k, k, n + 1], c);
                }
            }
            compare_polynomials(report, &rhs, &lhs.truncate_degree(&[3], o));
        }
        IdentityName::TypeDGf => type_d(o, report)?,
    }
    Ok(())
}

/// `N(D_n; u, v) = u^n + v^n + Σ_{0<k<n} [C(n,k)^2 - n/(n-1) C(n-1,k-1) C(n-1,k)] u^{n-k} v^k`,
/// with the empty-row convention `N(D_0) = 1`.
pub fn type_d_row(n: u32) -> LaurentPolynomial {
    let al = Alphabet::new(&["u", "v"]);
    if n == 0 {
        return LaurentPolynomial::one(&al);
    }
    let n = n as i64;
    let mut p = LaurentPolynomial::monomial(&al, &[n as i32, 0], int(1)) + LaurentPolynomial::monomial(&al, &[0, n as i32], int(1));
    for k in 1..n {
        let c = bigint_rat(binomial(n, k).pow(2))
            - bigint_rat(binomial(n - 1, k - 1) * binomial(n - 1, k)) * rat(n, n - 1);
        p = p + LaurentPolynomial::monomial(&al, &[(n - k) as i32, k as i32], c);
    }
    p
}

/// The Type D chain: explicit rows = central-binomial minus the shifted Narayana
/// series = `1/√(...)` plus `s ∂_x` of the Narayana series = the closed form.
fn type_d(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = t_alphabet(1);
    let slot = [3usize];
    let lift = |p: &LaurentPolynomial, n: i64| {
        // u^i v^j -> s^n u^i v^j t^{n+1}
        p.remap(&al, &[1, 2]) * LaurentPolynomial::monomial(&al, &[n as i32, 0, 0, n as i32 + 1], int(1))
    };
    let mut explicit = LaurentPolynomial::zero(&al);
    let mut rearranged = LaurentPolynomial::zero(&al);
    for n in 0..o as i64 {
        explicit = explicit + lift(&type_d_row(n as u32), n);
        let mut row = LaurentPolynomial::zero(&al);
        for k in 0..=n {
            row = row + LaurentPolynomial::monomial(&al, &[n as i32, (n - k) as i32, k as i32, n as i32 + 1], bigint_rat(binomial(n, k).pow(2)));
        }
        // (n+1) s^{n+1} t^{n+2} (1/n) Σ C(n,k-1)C(n,k) u^{n+1-k} v^k, for index n-1
        let m = n - 1;
        if m >= 1 {
            for k in 1..=m {
                let c = bigint_rat(binomial(m, k - 1) * binomial(m, k)) * rat(m + 1, m);
                row = row - LaurentPolynomial::monomial(&al, &[n as i32, (m + 1 - k) as i32, k as i32, n as i32 + 1], c);
            }
        }
        rearranged = rearranged + row;
    }
    compare_polynomials(report, &explicit, &rearranged);

    // t Δ^{-1/2} + s ∂_x G, with ∂_x = -t^2 ∂_t and G = (1 - s(u+v)t - √Δ)/(2s)
    let t = t_var(1, "t1");
    let s = t_var(1, "s");
    let upv = t_var(1, "u") + t_var(1, "v");
    let narayana_series = g01_polynomial(o as u32 + 1)?;
    let dx = narayana_series.derivative(3).mul_ref(&t.pow(2)).scale(&int(-1));
    let via_derivative = (discriminant_power(-1, o as u32)?.mul_ref(&t) + dx.mul_ref(&s)).truncate_degree(&slot, o);
    compare_polynomials(report, &rearranged.truncate_degree(&slot, o), &via_derivative);

    let dm2 = (t_var(1, "u") - t_var(1, "v")).pow(2);
    let one = LaurentPolynomial::one(&al);
    let numer = one.scale(&int(2)) - &(&(&s * &upv) * &t) + (&(&s.pow(2) * &dm2) * &t.pow(2));
    let closed = (&(&s * &upv) * &t.pow(2)).scale(&rat(1, 2))
        + numer.mul_ref(&t).mul_truncated(&discriminant_power(-1, o as u32)?, &slot, o).scale(&rat(1, 2));
    compare_polynomials(report, &via_derivative, &closed.truncate_degree(&slot, o));
    Ok(())
}

/// Theories of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    WittenKontsevich,
    Hermitian,
    EvenCoupling,
    Dessin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointCount {
    One,
    Two,
    Three,
    OneGenusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogKey {
    pub theory: Theory,
    pub points: PointCount,
}

impl CatalogKey {
    pub fn all() -> Vec<CatalogKey> {
        use PointCount::*;
        use Theory::*;
        let mut v = Vec::new();
        for theory in [WittenKontsevich, Hermitian, EvenCoupling] {
            v.push(CatalogKey { theory, points: One });
            v.push(CatalogKey { theory, points: Two });
        }
        for points in [One, Two, Three, OneGenusOne] {
            v.push(CatalogKey { theory: Dessin, points });
        }
        v
    }

    pub fn name(&self) -> String {
        let t = match self.theory {
            Theory::WittenKontsevich => "WK",
            Theory::Hermitian => "hermitian",
            Theory::EvenCoupling => "even-coupling",
            Theory::Dessin => "dessin",
        };
        let p = match self.points {
            PointCount::One => "one",
            PointCount::Two => "two",
            PointCount::Three => "three",
            PointCount::OneGenusOne => "one-genus-one",
        };
        format!("{t}/{p}")
    }
}

impl FromStr for CatalogKey {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CatalogKey::all().into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<String> = CatalogKey::all().iter().map(|k| k.name()).collect();
            format!("unknown catalog entry {s:?}; valid: {}", names.join(", "))
        })
    }
}

/// Expands the closed form of `key` and compares with its coefficient law,
/// through coupling order `order`.
pub fn catalog_check(key: CatalogKey, order: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("catalog", &key.name(), order);
    let o = order as i32;
    let result = match (key.theory, key.points) {
        (Theory::WittenKontsevich, PointCount::One) => wk_one(o, &mut report),
        (Theory::WittenKontsevich, PointCount::Two) => wk_two(o, &mut report),
        (Theory::Hermitian, PointCount::One) => hermitian_one(o, &mut report),
        (Theory::Hermitian, PointCount::Two) => hermitian_two(o, &mut report),
        (Theory::EvenCoupling, PointCount::One) => even_one(o, &mut report),
        (Theory::EvenCoupling, PointCount::Two) => even_two(o, &mut report),
        (Theory::Dessin, points) => dessin_entry(points, order, &mut report),
        _ => Err(AlgebraError::NotExpressible(format!("no closed form for {}", key.name()))),
    };
    if let Err(e) = result {
        report.fail("evaluation".into(), "expansion", &e.to_string());
    }
    report.timed(start)
}

/// `(1 + c·x)^{k/2}` over `al` through `x`-degree `order`, where `x` is the grading variable.
fn graded_root(al: &Alphabet, grade: &str, linear: &LaurentPolynomial, k: i32, order: i32) -> Result<LaurentPolynomial, AlgebraError> {
    half_power(&(LaurentPolynomial::one(al) + linear.clone()), grade, k, order)
}

/// `G = z - g0/z - z(1 - 2g0/z^2)^{1/2}`; with `w = 1/z^2` the coefficient of
/// `z^{-(2n+3)}` is that of `w^{n+2}` in `1 - g0 w - (1 - 2 g0 w)^{1/2}`.
fn wk_one(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = Alphabet::new(&["g0", "w"]);
    let gw = LaurentPolynomial::monomial(&al, &[1, 1], int(1));
    let root = graded_root(&al, "g0", &gw.scale(&int(-2)), 1, o)?;
    let f = LaurentPolynomial::one(&al) - &gw - &root;
    let mut law = LaurentPolynomial::zero(&al);
    for n in 0..=(o - 2) as i64 {
        let c = bigint_rat(double_factorial(2 * n + 1)) / bigint_rat(factorial(n as u64 + 2));
        let via_catalan = catalan(n as u32 + 1) / bigint_rat(num::BigInt::from(2).pow(n as u32 + 1));
        report.check(|| format!("n={n} double-factorial vs Catalan"), &c.to_string(), &via_catalan.to_string());
        law = law + LaurentPolynomial::monomial(&al, &[n as i32 + 2, n as i32 + 2], c);
    }
    compare_polynomials(report, &law, &f);
    Ok(())
}

/// With `w_i = 1/z_i^2` and `R_i = (1 - 2 g0 w_i)^{1/2}`:
/// `w1 w2 [(w1 + w2 - 4 g0 w1 w2)/(R1 R2) - (w1 + w2)] = (w1 - w2)^2 Σ c_kl w1^{k+1} w2^{l+1}`.
fn wk_two(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = Alphabet::new(&["g0", "w1", "w2"]);
    let g = [0usize];
    let var = |n: &str| LaurentPolynomial::var(&al, n);
    let (g0, w1, w2) = (var("g0"), var("w1"), var("w2"));
    let r1 = graded_root(&al, "g0", &(&g0 * &w1).scale(&int(-2)), -1, o)?;
    let r2 = graded_root(&al, "g0", &(&g0 * &w2).scale(&int(-2)), -1, o)?;
    let sum = &w1 + &w2;
    let numer = &sum - &(&(&g0 * &w1) * &w2).scale(&int(4));
    let lhs = (numer.mul_truncated(&r1.mul_truncated(&r2, &g, o), &g, o) - sum) * (&w1 * &w2);
    let mut series = LaurentPolynomial::zero(&al);
    for k in 0..o as i64 {
        for l in 0..(o as i64 - k) {
            let c = bigint_rat(double_factorial(2 * k + 1) * double_factorial(2 * l + 1))
                / bigint_rat(factorial(k as u64) * factorial(l as u64) * num::BigInt::from(k + l + 1));
            series = series + LaurentPolynomial::monomial(&al, &[(k + l + 1) as i32, k as i32 + 1, l as i32 + 1], c);
        }
    }
    let rhs = series * (&w1 - &w2).pow(2);
    compare_polynomials(report, &rhs, &lhs.truncate_degree(&g, o));
    Ok(())
}

/// `(x - √(x^2 - 4t))/2 = (1 - √(1 - 4t w^2))/(2w)` with `w = 1/x`.
fn hermitian_one(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = Alphabet::new(&["t", "w"]);
    let tw2 = LaurentPolynomial::monomial(&al, &[1, 2], int(-4));
    let root = graded_root(&al, "t", &tw2, 1, o + 1)?;
    let g = (LaurentPolynomial::one(&al) - &root) * LaurentPolynomial::monomial(&al, &[0, -1], rat(1, 2));
    let mut law = LaurentPolynomial::zero(&al);
    for n in 0..=o {
        law = law + LaurentPolynomial::monomial(&al, &[n + 1, 2 * n + 1], catalan(n as u32));
    }
    compare_polynomials(report, &law, &g.truncate_degree(&[0], o + 1));
    // odd moments: no even power of w survives
    let even = g.terms().filter(|(e, _)| e[1] % 2 == 0).count();
    report.check(|| "odd moments".into(), "0", &even.to_string());
    Ok(())
}

/// `w1^2 w2^2 [(1 - 4t w1 w2)/(2 R1 R2) - 1/2] = (w1 - w2)^2 (odd family + even family)`,
/// `R_i = (1 - 4t w_i^2)^{1/2}`.
fn hermitian_two(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = Alphabet::new(&["t", "w1", "w2"]);
    let g = [0usize];
    let var = |n: &str| LaurentPolynomial::var(&al, n);
    let (t, w1, w2) = (var("t"), var("w1"), var("w2"));
    let r1 = graded_root(&al, "t", &(&t * &w1.pow(2)).scale(&int(-4)), -1, o)?;
    let r2 = graded_root(&al, "t", &(&t * &w2.pow(2)).scale(&int(-4)), -1, o)?;
    let one = LaurentPolynomial::one(&al);
    let numer = &one - &(&(&t * &w1) * &w2).scale(&int(4));
    let lhs = (numer.mul_truncated(&r1.mul_truncated(&r2, &g, o), &g, o).scale(&rat(1, 2)) - one.scale(&rat(1, 2)))
        * (&w1 * &w2).pow(2);
    let f = |m: i64| bigint_rat(factorial(2 * m as u64 + 1)) / bigint_rat(factorial(m as u64).pow(2));
    let mut series = LaurentPolynomial::zero(&al);
    for m in 0..=o as i64 {
        for n in 0..=o as i64 {
            if m + n + 1 <= o as i64 {
                let c = f(m) * f(n) / int(m + n + 1);
                series = series + LaurentPolynomial::monomial(&al, &[(m + n + 1) as i32, 2 * m as i32 + 2, 2 * n as i32 + 2], c);
            }
            if m + n + 2 <= o as i64 {
                let c = f(m) * f(n) * rat(4, m + n + 2);
                series = series + LaurentPolynomial::monomial(&al, &[(m + n + 2) as i32, 2 * m as i32 + 3, 2 * n as i32 + 3], c);
            }
        }
    }
    let rhs = series * (&w1 - &w2).pow(2);
    compare_polynomials(report, &rhs, &lhs.truncate_degree(&g, o));
    Ok(())
}

/// `(1/4)(1 - 2t/x - √(1 - 4t/x))` against both displayed coefficient forms.
fn even_one(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = Alphabet::new(&["t", "w"]);
    let tw = LaurentPolynomial::monomial(&al, &[1, 1], int(1));
    let root = graded_root(&al, "t", &tw.scale(&int(-4)), 1, o)?;
    let g = (LaurentPolynomial::one(&al) - &tw.scale(&int(2)) - &root).scale(&rat(1, 4));
    let mut factorial_form = LaurentPolynomial::zero(&al);
    let mut double_form = LaurentPolynomial::zero(&al);
    for n in 2..=o as i64 {
        let c = bigint_rat(factorial(2 * n as u64 - 2)) / bigint_rat(factorial(n as u64 - 1) * factorial(n as u64)) * rat(1, 2);
        factorial_form = factorial_form + LaurentPolynomial::monomial(&al, &[n as i32, n as i32], c);
        let d = bigint_rat(double_factorial(2 * n - 3) * num::BigInt::from(2).pow(n as u32)) / bigint_rat(factorial(n as u64)) * rat(1, 4);
        double_form = double_form + LaurentPolynomial::monomial(&al, &[n as i32, n as i32], d);
    }
    compare_polynomials(report, &factorial_form, &g);
    compare_polynomials(report, &double_form, &g);
    Ok(())
}

/// `w1^2 w2^2 [(1 - 2t w1 - 2t w2)/(2 R1 R2) - 1/2] = (w1 - w2)^2 · 2 Σ_l (t^l/l) Σ_{m+n=l-2} ...`,
/// `R_i = (1 - 4t w_i)^{1/2}`.
fn even_two(o: i32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let al = Alphabet::new(&["t", "w1", "w2"]);
    let g = [0usize];
    let var = |n: &str| LaurentPolynomial::var(&al, n);
    let (t, w1, w2) = (var("t"), var("w1"), var("w2"));
    let r1 = graded_root(&al, "t", &(&t * &w1).scale(&int(-4)), -1, o)?;
    let r2 = graded_root(&al, "t", &(&t * &w2).scale(&int(-4)), -1, o)?;
    let one = LaurentPolynomial::one(&al);
    let numer = &one - &(&t * &(&w1 + &w2)).scale(&int(2));
    let lhs = (numer.mul_truncated(&r1.mul_truncated(&r2, &g, o), &g, o).scale(&rat(1, 2)) - one.scale(&rat(1, 2)))
        * (&w1 * &w2).pow(2);
    let f = |m: i64| bigint_rat(factorial(2 * m as u64 + 1)) / bigint_rat(factorial(m as u64).pow(2));
    let mut series = LaurentPolynomial::zero(&al);
    for l in 2..=o as i64 {
        for m in 0..=l - 2 {
            let n = l - 2 - m;
            let c = f(m) * f(n) * rat(2, l);
            series = series + LaurentPolynomial::monomial(&al, &[l as i32, m as i32 + 2, n as i32 + 2], c);
        }
    }
    let rhs = series * (&w1 - &w2).pow(2);
    compare_polynomials(report, &rhs, &lhs.truncate_degree(&g, o));
    Ok(())
}

/// Dessin entries: `G_{0,1}` against the Narayana law, the others against the recursion.
fn dessin_entry(points: PointCount, order: u32, report: &mut VerificationReport) -> Result<(), AlgebraError> {
    let form = match points {
        PointCount::One => DessinForm::G01,
        PointCount::Two => DessinForm::G02,
        PointCount::Three => DessinForm::G03,
        PointCount::OneGenusOne => DessinForm::G11,
    };
    let (g, n) = form.genus_points();
    let closed = dessin_closed_series(form, order)?;
    if form == DessinForm::G01 {
        for a in 1..order {
            let law = narayana_one_point(a);
            report.check(|| format!("[{a}]"), &law.to_string(), &closed.coefficient(&[a]).to_string());
        }
        return Ok(());
    }
    let mut engine = VirasoroEngine::new();
    let recursion = engine
        .npoint_series(g, n, order)
        .map_err(|e| AlgebraError::NotExpressible(e.to_string()))?;
    let (checked, d) = recursion.compare(&closed);
    report.absorb(checked, d);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn narayana_rows() {
        let row: Vec<Rational> = (1..=4).map(|k| narayana(4, k).unwrap()).collect();
        assert_eq!(row, vec![int(1), int(6), int(6), int(1)]);
        assert_eq!(narayana(1, 1).unwrap(), int(1));
        assert!(narayana(3, 0).is_err());
        assert!(narayana(3, 4).is_err());
        for n in 1..=20 {
            assert_eq!(narayana_poly(n).evaluate("q", &int(1)).unwrap().constant_term(), catalan(n));
        }
        assert_eq!(catalan(5), int(42));
    }

    #[test]
    fn g01_numerators() {
        let g = dessin_closed_series(DessinForm::G01, 6).unwrap();
        for a in 1..=5u32 {
            assert_eq!(g.coefficient(&[a]), narayana_one_point(a), "a={a}");
        }
    }

    #[test]
    fn g11_second_term_carries_uv() {
        let g = dessin_closed_series(DessinForm::G11, 6).unwrap();
        let al = Alphabet::new(&["s", "u", "v"]);
        assert_eq!(g.coefficient(&[3]), LaurentPolynomial::monomial(&al, &[3, 1, 1], int(1)));
        let second = LaurentPolynomial::monomial(&al, &[4, 2, 1], int(5)) + LaurentPolynomial::monomial(&al, &[4, 1, 2], int(5));
        assert_eq!(g.coefficient(&[4]), second);
    }

    #[test]
    fn g02_is_symmetric_with_corner() {
        let g = dessin_closed_series(DessinForm::G02, 7).unwrap();
        assert!(g.is_symmetric());
        let al = Alphabet::new(&["s", "u", "v"]);
        assert_eq!(g.coefficient(&[1, 1]), LaurentPolynomial::monomial(&al, &[2, 1, 1], int(1)));
    }

    #[test]
    fn type_b_row_two() {
        let rows = central_side(2);
        let row2: Vec<Rational> = (0..=2).map(|k| rows.coefficient(&[2 - k, k, 2])).collect();
        assert_eq!(row2, vec![int(1), int(4), int(1)]);
    }

    #[test]
    fn identities_pass() {
        for name in IdentityName::ALL {
            let r = gf_identity_check(name, 6);
            assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
        }
        assert_eq!(gf_identity_check(IdentityName::TypeBGf, 1).status, Status::Skipped);
    }

    #[test]
    fn catalog_passes() {
        for key in CatalogKey::all() {
            let r = catalog_check(key, 6);
            assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
        }
    }

    #[test]
    fn even_coupling_first_coefficient_is_one_half() {
        let al = Alphabet::new(&["t", "w"]);
        let tw = LaurentPolynomial::monomial(&al, &[1, 1], int(1));
        let root = graded_root(&al, "t", &tw.scale(&int(-4)), 1, 4).unwrap();
        let g = (LaurentPolynomial::one(&al) - &tw.scale(&int(2)) - &root).scale(&rat(1, 4));
        assert_eq!(g.coefficient(&[2, 2]), rat(1, 2));
    }
}
