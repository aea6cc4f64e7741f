//! Expansions at the two branch points `x_± = s(√u ± √v)^2` in the local coordinate
//! `ξ = (x - x_±)^{1/2}`, the coefficients of `y` there, and the kernel identities
//! behind the local form of `dz1 dz2/(z1 - z2)^2`.
//!
//! Local symbols: `qs = s^{1/2}`, `qa = u^{1/4}`, `qb = v^{1/4}` and `r = 1/(√u ± √v)`
//! (branch dependent). They never leave this module's alphabet.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::One;

use crate::algebra::{
    binomial, int, rat, AlgebraError, Alphabet, Coefficient, GaussianRational, LaurentPolynomial, Rational,
    TruncatedSeries,
};
use crate::closed_forms::compare_polynomials;
use crate::report::VerificationReport;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AiryError {
    #[error("T({n},{k}) is out of range")]
    OutOfRange { n: i64, k: i64 },
    #[error("T({n},{k}) = {value} is not an integer")]
    NotInteger { n: i64, k: i64, value: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }

    fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

impl FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(format!("unknown branch {s:?}; valid: plus, minus")),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `[qs, qa, qb, r]`.
pub fn local_alphabet() -> Alphabet {
    Alphabet::new(&["qs", "qa", "qb", "r"])
}

fn gmono(e: [i32; 4], c: GaussianRational) -> LaurentPolynomial<GaussianRational> {
    LaurentPolynomial::monomial(&local_alphabet(), &e, c)
}

fn g(r: Rational) -> GaussianRational {
    GaussianRational::from(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchPointData {
    pub branch: Branch,
    /// `s(a ± b)^2` over `[s, a, b]`, `a = √u`, `b = √v`.
    pub x_value: LaurentPolynomial,
    pub local_alphabet: Alphabet,
}

impl BranchPointData {
    pub fn new(branch: Branch) -> Self {
        let al = Alphabet::new(&["s", "a", "b"]);
        let s = LaurentPolynomial::var(&al, "s");
        let a = LaurentPolynomial::var(&al, "a");
        let b = LaurentPolynomial::var(&al, "b");
        let root = &a + &b.scale(&int(branch.sign()));
        BranchPointData { branch, x_value: &s * &root.pow(2), local_alphabet: local_alphabet() }
    }

    /// `(±√v)^{1/2} / v^{1/4}`: `1` or the principal `i`.
    pub fn root_phase(&self) -> GaussianRational {
        match self.branch {
            Branch::Plus => GaussianRational::one(),
            Branch::Minus => GaussianRational::i(),
        }
    }
}

/// `2 (√u)^{1/2} (±√v)^{1/2} s^{1/2} / (s(√u ± √v)^2) = 2ε qa qb r^2 qs^{-3}`.
pub fn leading_factor(branch: Branch) -> LaurentPolynomial<GaussianRational> {
    let eps = BranchPointData::new(branch).root_phase();
    gmono([-3, 1, 1, 2], eps * g(int(2)))
}

/// `(1+4X)^{1/2} = 1 + 2 Σ_{m≥0} (-1)^m C(2m,m)/(m+1) X^{m+1}`, returned as the list of
/// coefficients of `X^0..=X^terms`.
fn sqrt_one_plus_4x(terms: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for m in 0..terms as i64 {
        let c = Rational::from(binomial(2 * m, m)) * rat(2, m + 1);
        out.push(if m % 2 == 0 { c } else { -c });
    }
    out
}

/// The displayed normalization `2s·y` of `y` on the branch, as an odd series in `ξ`
/// through `ξ^order`: `ξ · leading · (1 ± ξ^2/(4√(uv)s))^{1/2} / (1 + ξ^2 r^2/s)`.
pub fn y_branch_series(branch: Branch, order: i32) -> TruncatedSeries<GaussianRational> {
    let al = local_alphabet();
    let half = (order.max(0) / 2) as usize + 1;
    // X = ±ξ^2/(16 qa^2 qb^2 qs^2), so 1 + 4X = 1 ± ξ^2/(4√(uv)s)
    let sq = sqrt_one_plus_4x(half);
    let mut root = Vec::with_capacity(2 * half + 1);
    let mut geo = Vec::with_capacity(2 * half + 1);
    for m in 0..=half as i32 {
        let sign = if branch == Branch::Minus && m % 2 == 1 { -1 } else { 1 };
        let c = &sq[m as usize] * rat(sign, 16i64.pow(m as u32));
        root.push(gmono([-2 * m, -2 * m, -2 * m, 0], g(c)));
        root.push(LaurentPolynomial::zero(&al));
        // 1/(1+Y) = Σ (-Y)^m, Y = ξ^2 r^2 qs^{-4}
        let c = int(if m % 2 == 0 { 1 } else { -1 });
        geo.push(gmono([-4 * m, 0, 0, 2 * m], g(c)));
        geo.push(LaurentPolynomial::zero(&al));
    }
    let root = TruncatedSeries::new("xi", &al, 0, order, root);
    let geo = TruncatedSeries::new("xi", &al, 0, order, geo);
    let lead = TruncatedSeries::new("xi", &al, 1, order + 1, vec![leading_factor(branch)]);
    lead.mul(&root).and_then(|p| p.mul(&geo)).expect("same variable").truncate(order)
}

/// `y^2 (s(√u ± √v)^2 + ξ^2)^2 ∓ ξ^2 (4√(uv)s ± ξ^2)`, which vanishes identically.
pub fn y_squared_residual(branch: Branch, order: i32) -> Result<TruncatedSeries<GaussianRational>, AlgebraError> {
    let al = local_alphabet();
    let y = y_branch_series(branch, order);
    let sg = g(int(branch.sign()));
    // s(√u ± √v)^2 = qs^4 r^{-2}
    let den = TruncatedSeries::new(
        "xi",
        &al,
        0,
        2 * order + 2,
        vec![gmono([4, 0, 0, -2], GaussianRational::one()), LaurentPolynomial::zero(&al), LaurentPolynomial::one(&al)],
    );
    let rhs = TruncatedSeries::new(
        "xi",
        &al,
        2,
        2 * order + 2,
        vec![gmono([2, 2, 2, 0], g(int(4))), LaurentPolynomial::zero(&al), LaurentPolynomial::constant(&al, sg.clone())],
    )
    .scale(&sg);
    y.mul(&y)?.mul(&den.mul(&den)?)?.sub(&rhs)
}

/// The coefficient of `ξ^k` in [`y_branch_series`].
pub fn times(branch: Branch, k: u32) -> LaurentPolynomial<GaussianRational> {
    y_branch_series(branch, k as i32).coefficient(k as i32).expect("within order")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TRow {
    pub n: u32,
    pub values: Vec<Rational>,
}

/// `T(n,k) = 2 C(n,k)^2 C(2n+2,n) / C(2n+2,2k+1)`.
pub fn t_number(n: i64, k: i64) -> Result<Rational, AiryError> {
    if n < 0 || k < 0 || k > n {
        return Err(AiryError::OutOfRange { n, k });
    }
    let c = binomial(n, k);
    let value = Rational::new(c.clone() * c * binomial(2 * n + 2, n) * 2, binomial(2 * n + 2, 2 * k + 1));
    if !value.is_integer() {
        return Err(AiryError::NotInteger { n, k, value: value.to_string() });
    }
    Ok(value)
}

pub fn t_row(n: u32) -> Result<TRow, AiryError> {
    let values = (0..=n as i64).map(|k| t_number(n as i64, k)).collect::<Result<_, _>>()?;
    Ok(TRow { n, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalIdentity {
    BergmanPP,
    SqrtProduct,
    BergmanMixed,
}

impl LocalIdentity {
    pub const ALL: [LocalIdentity; 3] = [LocalIdentity::BergmanPP, LocalIdentity::SqrtProduct, LocalIdentity::BergmanMixed];

    pub fn as_str(self) -> &'static str {
        match self {
            LocalIdentity::BergmanPP => "bergman-pp",
            LocalIdentity::SqrtProduct => "sqrt-product",
            LocalIdentity::BergmanMixed => "bergman-mixed",
        }
    }
}

impl FromStr for LocalIdentity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        LocalIdentity::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = LocalIdentity::ALL.iter().map(|n| n.as_str()).collect();
            format!("unknown identity {s:?}; valid: {}", names.join(", "))
        })
    }
}

fn xy() -> Alphabet {
    Alphabet::new(&["x", "y"])
}

fn xy_mono(ex: i32, ey: i32, c: Rational) -> LaurentPolynomial {
    LaurentPolynomial::monomial(&xy(), &[ex, ey], c)
}

fn map_coeffs<F>(s: &TruncatedSeries, f: F) -> Result<TruncatedSeries, AlgebraError>
where
    F: Fn(&LaurentPolynomial) -> Result<LaurentPolynomial, AlgebraError>,
{
    let coeffs = s.iter().map(|(_, c)| f(c)).collect::<Result<Vec<_>, _>>()?;
    Ok(TruncatedSeries::new(s.var(), s.alphabet(), s.min_exp(), s.order(), coeffs))
}

/// `(1 + 4t v^2)^{1/2}` in `t` over `[x, y]`.
fn root_series(var: &str, order: i32) -> Result<TruncatedSeries, AlgebraError> {
    let one = LaurentPolynomial::one(&xy());
    let v2 = LaurentPolynomial::var_pow(&xy(), var, 2).scale(&int(4));
    TruncatedSeries::new("t", &xy(), 0, order, vec![one, v2]).sqrt()
}

/// `Σ_k T(n,k) x^{2k} y^{2n-2k}`.
fn t_form(n: i64) -> Result<LaurentPolynomial, AiryError> {
    let mut p = LaurentPolynomial::zero(&xy());
    for k in 0..=n {
        p.add_assign_ref(&xy_mono(2 * k as i32, (2 * n - 2 * k) as i32, t_number(n, k)?));
    }
    Ok(p)
}

fn compare_series(report: &mut VerificationReport, expected: &TruncatedSeries, actual: &TruncatedSeries, order: i32) {
    for k in 0..=order {
        let (e, a) = (expected.coefficient(k), actual.coefficient(k));
        match (e, a) {
            (Ok(e), Ok(a)) => compare_polynomials(report, &e, &a),
            (Err(e), _) | (_, Err(e)) => report.fail(format!("{}^{k}", expected.var()), "known coefficient", &e.to_string()),
        }
    }
}

/// `(x - y)^2` over `[x, y]`.
fn diff_sq() -> LaurentPolynomial {
    (&LaurentPolynomial::var(&xy(), "x") - &LaurentPolynomial::var(&xy(), "y")).pow(2)
}

/// `(x - y)^2 / (A_x A_y (x A_y - y A_x)^2)` with `A_v = (1 + 4t v^2)^{1/2}`.
fn pp_kernel_scaled(order: i32) -> Result<TruncatedSeries, AlgebraError> {
    let ax = root_series("x", order)?;
    let ay = root_series("y", order)?;
    let x = LaurentPolynomial::var(&xy(), "x");
    let y = LaurentPolynomial::var(&xy(), "y");
    let d = ay.mul_coefficient(&x).sub(&ax.mul_coefficient(&y))?;
    let dq = map_coeffs(&d, |c| c.divide_by_difference(0, 1))?;
    ax.mul(&ay)?.mul(&dq.mul(&dq)?)?.invert()
}

fn check_bergman_pp(report: &mut VerificationReport, order: i32) -> Result<(), AiryError> {
    let left = pp_kernel_scaled(order)?.sub(&TruncatedSeries::one("t", &xy(), order))?;
    let mut r = Vec::new();
    r.push(LaurentPolynomial::zero(&xy()));
    for n in 0..order as i64 {
        let sign = if n % 2 == 0 { -1 } else { 1 };
        r.push(t_form(n)?.scale(&int(sign * (n + 2))));
    }
    let right = TruncatedSeries::new("t", &xy(), 0, order, r).mul_coefficient(&diff_sq());
    compare_series(report, &right, &left, order);
    // the low coefficients of LHS - 1/(x - y)^2 written out explicitly
    let shown = [
        xy_mono(0, 0, int(-2)),
        &xy_mono(2, 0, int(6)) + &xy_mono(0, 2, int(6)),
        &(&xy_mono(4, 0, int(-20)) + &xy_mono(2, 2, int(-24))) + &xy_mono(0, 4, int(-20)),
    ];
    for (k, want) in shown.iter().enumerate() {
        let k = k as i32 + 1;
        if k > order {
            break;
        }
        let got = left.coefficient(k)?.divide_by_difference(0, 1)?.divide_by_difference(0, 1)?;
        compare_polynomials(report, want, &got);
    }
    Ok(())
}

fn check_sqrt_product(report: &mut VerificationReport, order: i32) -> Result<(), AiryError> {
    let al = Alphabet::new(&["a", "b"]);
    let a = LaurentPolynomial::var(&al, "a");
    let b = LaurentPolynomial::var(&al, "b");
    let one = LaurentPolynomial::one(&al);
    let fa = TruncatedSeries::new("x", &al, 0, order, vec![one.clone(), -a.clone()]);
    let fb = TruncatedSeries::new("x", &al, 0, order, vec![one, -b.clone()]);
    let left = TruncatedSeries::one("x", &al, order).sub(&fa.mul(&fb)?.sqrt()?)?;
    let mut r = vec![LaurentPolynomial::zero(&al), (&a + &b).scale(&rat(1, 2))];
    for n in 0..(order as i64 - 1).max(0) {
        let mut row = LaurentPolynomial::zero(&al);
        for k in 0..=n {
            row.add_assign_ref(&LaurentPolynomial::monomial(&al, &[k as i32, (n - k) as i32], t_number(n, k)?));
        }
        let scale = Rational::new(1.into(), num::BigInt::from(8) * num::BigInt::from(4).pow(n as u32));
        r.push(&(&b - &a).pow(2) * &row.scale(&scale));
    }
    let right = TruncatedSeries::new("x", &al, 0, order, r);
    compare_series(report, &right, &left, order);

    // with a = -4t x^2, b = -4t y^2 and the series variable moved to t
    let ax = root_series("x", order)?;
    let ay = root_series("y", order)?;
    let left = TruncatedSeries::one("t", &xy(), order).sub(&ax.mul(&ay)?)?;
    let sq = (&xy_mono(2, 0, int(1)) - &xy_mono(0, 2, int(1))).pow(2).scale(&int(2));
    let mut r = vec![LaurentPolynomial::zero(&xy()), &xy_mono(2, 0, int(-2)) + &xy_mono(0, 2, int(-2))];
    for n in 0..(order as i64 - 1).max(0) {
        r.push(&sq * &t_form(n)?.scale(&int(if n % 2 == 0 { 1 } else { -1 })));
    }
    let right = TruncatedSeries::new("t", &xy(), 0, order, r);
    compare_series(report, &right, &left, order);
    Ok(())
}

fn check_bergman_mixed(report: &mut VerificationReport, order: i32) -> Result<(), AiryError> {
    let ax = root_series("x", order)?;
    let ay = root_series("y", order)?;
    let p = ax.mul(&ay)?;
    let al = xy();
    let txy = TruncatedSeries::new("t", &al, 1, order, vec![xy_mono(1, 1, int(4))]);
    let q = TruncatedSeries::new(
        "t",
        &al,
        0,
        order,
        vec![LaurentPolynomial::one(&al), &xy_mono(2, 0, int(4)) + &xy_mono(0, 2, int(4))],
    );
    let q2inv = q.mul(&q)?.invert()?;
    let plus = p.add(&txy)?;
    let minus = p.sub(&txy)?;
    let left = p.mul(&plus.mul(&plus)?)?.invert()?;
    let middle = minus.mul(&minus)?.mul(&p.invert()?)?.mul(&q2inv)?;
    let t2 = TruncatedSeries::new("t", &al, 2, order, vec![xy_mono(2, 2, int(16))]);
    let right = p
        .mul(&q2inv)?
        .sub(&txy.scale(&int(2)).mul(&q2inv)?)?
        .add(&t2.mul(&p.invert()?)?.mul(&q2inv)?)?;
    compare_series(report, &left, &middle, order);
    compare_series(report, &middle, &right, order);
    Ok(())
}

pub fn local_identity_check(name: LocalIdentity, order: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("local-identity", name.as_str(), order);
    if order < 2 {
        return report.skipped("order below 2").timed(start);
    }
    let o = order as i32;
    let outcome = match name {
        LocalIdentity::BergmanPP => check_bergman_pp(&mut report, o),
        LocalIdentity::SqrtProduct => check_sqrt_product(&mut report, o),
        LocalIdentity::BergmanMixed => check_bergman_mixed(&mut report, o),
    };
    if let Err(e) = outcome {
        report.fail(name.as_str().into(), "evaluation", &e.to_string());
    }
    report.timed(start)
}

/// `dz1 dz2/(z1 - z2)^2` pulled back along `z_j = ξ_j/(4sab + ξ_j^2)^{1/2}` equals the
/// bergman-pp kernel with `t = 1/(16sab)`, `x = ξ1`, `y = ξ2`. Both sides are compared
/// after multiplying by `(x - y)^2`; the `(4sab)^{-1/2}` factors cancel between
/// numerator and denominator.
pub fn kernel_local_form_check(order: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("local-identity", "kernel-local-form", order);
    let o = order as i32;
    let run = |report: &mut VerificationReport| -> Result<(), AlgebraError> {
        let zeta = |v: &str| -> Result<TruncatedSeries, AlgebraError> {
            let var = LaurentPolynomial::var(&xy(), v);
            Ok(root_series(v, o)?.invert()?.mul_coefficient(&var))
        };
        let (zx, zy) = (zeta("x")?, zeta("y")?);
        let dzx = map_coeffs(&zx, |c| Ok(c.derivative(0)))?;
        let dzy = map_coeffs(&zy, |c| Ok(c.derivative(1)))?;
        let q = map_coeffs(&zx.sub(&zy)?, |c| c.divide_by_difference(0, 1))?;
        let pulled = dzx.mul(&dzy)?.mul(&q.mul(&q)?.invert()?)?;
        compare_series(report, &pp_kernel_scaled(o)?, &pulled, o);
        Ok(())
    };
    if let Err(e) = run(&mut report) {
        report.fail("kernel-local-form".into(), "evaluation", &e.to_string());
    }
    report.timed(start)
}

/// Series coefficients as `"re+im*i"` strings for JSON output.
pub fn times_json(branch: Branch, order: u32) -> serde_json::Value {
    let y = y_branch_series(branch, order as i32);
    let entries: Vec<serde_json::Value> = (1..=order as i32)
        .map(|k| {
            let c = y.coefficient(k).expect("within order");
            let terms: Vec<serde_json::Value> = c
                .terms()
                .map(|(e, c)| serde_json::json!({ "e": e.to_vec(), "c": c.to_json_string() }))
                .collect();
            serde_json::json!({ "k": k, "alphabet": local_alphabet().names(), "terms": terms, "text": c.to_text() })
        })
        .collect();
    serde_json::json!({ "branch": branch.name(), "order": order, "times": entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_rows_small() {
        let row = |n| t_row(n).unwrap().values;
        assert_eq!(row(0), vec![int(1)]);
        assert_eq!(row(1), vec![int(2), int(2)]);
        assert_eq!(row(2), vec![int(5), int(6), int(5)]);
        for n in 0..=10 {
            let r = row(n);
            assert!(r.iter().zip(r.iter().rev()).all(|(a, b)| a == b));
        }
        assert!(matches!(t_number(2, 3), Err(AiryError::OutOfRange { .. })));
    }

    #[test]
    fn displayed_root_expansion_matches_generic_sqrt() {
        let al = Alphabet::new(&["w"]);
        let one = LaurentPolynomial::one(&al);
        let four = LaurentPolynomial::constant(&al, int(4));
        let generic = TruncatedSeries::new("X", &al, 0, 8, vec![one, four]).sqrt().unwrap();
        let shown = sqrt_one_plus_4x(8);
        for k in 0..=8 {
            assert_eq!(generic.coefficient(k).unwrap().constant_term(), shown[k as usize]);
        }
    }

    #[test]
    fn y_series_is_odd_and_squares_back() {
        for br in [Branch::Plus, Branch::Minus] {
            let y = y_branch_series(br, 9);
            assert!(y.iter().all(|(k, c)| k % 2 == 1 || c.is_zero()));
            let res = y_squared_residual(br, 9).unwrap();
            assert!(res.order() >= 10);
            assert!(res.iter().all(|(_, c)| c.is_zero()), "{br}");
        }
    }

    #[test]
    fn times_values() {
        assert_eq!(times(Branch::Plus, 1), leading_factor(Branch::Plus));
        assert!(times(Branch::Plus, 2).is_zero());
        // ξ^3: leading · (1/(8 qa^2 qb^2 qs^2) - r^2 qs^{-4})
        let expect = &gmono([-5, -1, -1, 2], g(rat(1, 4))) - &gmono([-7, 1, 1, 4], g(int(2)));
        assert_eq!(times(Branch::Plus, 3), expect);
        let minus = times(Branch::Minus, 1);
        assert!(minus.terms().all(|(_, c)| !c.is_real()));
        // the square of the leading factor is sign-insensitive
        let sq = minus.pow(2);
        assert_eq!(sq, gmono([-6, 2, 2, 4], g(int(-4))));
    }

    #[test]
    fn local_identities_pass() {
        for name in LocalIdentity::ALL {
            let r = local_identity_check(name, 6);
            assert!(r.passed() && r.checked_count > 20, "{}", r.summary_line());
        }
        let r = kernel_local_form_check(5);
        assert!(r.passed() && r.checked_count > 20, "{}", r.summary_line());
    }

    #[test]
    fn x_values() {
        let d = BranchPointData::new(Branch::Minus);
        let al = d.x_value.alphabet().clone();
        let s = LaurentPolynomial::var(&al, "s");
        let (a, b) = (LaurentPolynomial::var(&al, "a"), LaurentPolynomial::var(&al, "b"));
        assert_eq!(d.x_value, &s * &(&a - &b).pow(2));
    }
}
