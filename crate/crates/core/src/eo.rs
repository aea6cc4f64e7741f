//! Eynard-Orantin recursion on the dessin spectral curve in the global coordinate `z`.
//!
//! With `α = (a-b)^2`, `β = (a+b)^2` (`u = a^2`, `v = b^2`) the curve is
//! `x = s(αz^2 - β)/(z^2 - 1)`, `y = -(α-β)z/(2s(αz^2 - β))`, and the recursion kernel
//! `k(z0, z) = (αz^2 - β)(z^2 - 1)^2 / (2(α-β)^2 z (z0^2 - z^2))`. Since
//! `(α-β)^2 = 16a^2b^2` every form is a Laurent polynomial in `a, b, z_i`.
//!
//! `ω_{g,n+1}(z0, J)` is the sum of the residues at `z = 0` and `z = ∞` of
//! `k(z0, z) B(z)`, where `B(z) = -[w_{g-1,n+2}(z, -z, J) + Σ' w(z, I) w(-z, I')]`
//! (the sign is `d(-z) = -dz`) and the primed sum skips `(0, ∅)` factors.
//! Residues come from truncated expansions in the chart variable.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num::One;

use crate::algebra::{int, rat, AlgebraError, Alphabet, Exponents, LaurentPolynomial, Rational, TruncatedSeries};
use crate::npoint::{t_alphabet, NPointSeries};
use crate::report::VerificationReport;
use crate::virasoro::VirasoroEngine;

#[derive(Debug, thiserror::Error)]
pub enum EoError {
    #[error("w_{{{g},{n}}} is not stable (need 2g-2+n > 0)")]
    Unstable { g: u32, n: usize },
    #[error("invariant violated for w_{{{g},{n}}}: {what}")]
    Invariant { g: u32, n: usize, what: String },
    #[error("result is not a polynomial in u, v: {0}")]
    NotPolynomialInUV(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `[a, b, z1, ..., zn]`.
pub fn form_alphabet(n: usize) -> Alphabet {
    let mut names: Vec<String> = vec!["a".into(), "b".into()];
    names.extend((1..=n).map(|i| format!("z{i}")));
    Alphabet::from_vec(names)
}

fn ab() -> Alphabet {
    Alphabet::new(&["a", "b"])
}

/// `(α, β)` over `[a, b]`; the swapped curve exchanges them (`a -> -a`).
fn alpha_beta(swapped: bool) -> (LaurentPolynomial, LaurentPolynomial) {
    let al = ab();
    let a = LaurentPolynomial::var(&al, "a");
    let b = LaurentPolynomial::var(&al, "b");
    let alpha = (&a - &b).pow(2);
    let beta = (&a + &b).pow(2);
    if swapped {
        (beta, alpha)
    } else {
        (alpha, beta)
    }
}

/// `1/(2(α-β)^2) = 1/(32 a^2 b^2)` over `[a, b]`.
fn kernel_norm() -> LaurentPolynomial {
    LaurentPolynomial::monomial(&ab(), &[-2, -2], rat(1, 32))
}

/// The curve as rational functions of `z` over `[a, b, s, z]`.
#[derive(Clone, Debug)]
pub struct SpectralCurveData {
    pub alpha: LaurentPolynomial,
    pub beta: LaurentPolynomial,
    pub x_num: LaurentPolynomial,
    pub x_den: LaurentPolynomial,
    pub y_num: LaurentPolynomial,
    pub y_den: LaurentPolynomial,
}

impl Default for SpectralCurveData {
    fn default() -> Self {
        Self::new()
    }
}

impl SpectralCurveData {
    pub fn new() -> Self {
        let al = Self::alphabet();
        let (alpha, beta) = alpha_beta(false);
        let lift = |p: &LaurentPolynomial| p.with_alphabet(&al).expect("subset");
        let (al_z, be_z) = (lift(&alpha), lift(&beta));
        let s = LaurentPolynomial::var(&al, "s");
        let z = LaurentPolynomial::var(&al, "z");
        let z2 = z.pow(2);
        let one = LaurentPolynomial::one(&al);
        let quad = &(&al_z * &z2) - &be_z;
        SpectralCurveData {
            x_num: &s * &quad,
            x_den: &z2 - &one,
            y_num: -(&(&al_z - &be_z) * &z),
            y_den: (&s * &quad).scale(&int(2)),
            alpha,
            beta,
        }
    }

    pub fn alphabet() -> Alphabet {
        Alphabet::new(&["a", "b", "s", "z"])
    }

    /// Numerator of `4s^2 y^2 x^2 - (x^2 - 2s(u+v)x + s^2(u-v)^2)` over the common
    /// denominator `x_den^2 y_den^2`; zero exactly when the curve equation holds.
    pub fn curve_identity_numerator(&self) -> LaurentPolynomial {
        let al = Self::alphabet();
        let s = LaurentPolynomial::var(&al, "s");
        let a = LaurentPolynomial::var(&al, "a");
        let b = LaurentPolynomial::var(&al, "b");
        let u_plus_v = &a.pow(2) + &b.pow(2);
        let u_minus_v_sq = (&a.pow(2) - &b.pow(2)).pow(2);
        let (xn, xd, yn, yd) = (&self.x_num, &self.x_den, &self.y_num, &self.y_den);
        let lhs = (&(&s.pow(2) * &yn.pow(2)) * &xn.pow(2)).scale(&int(4));
        let quad = &(&xn.pow(2) - &(&(&(&s * &u_plus_v) * xn) * xd).scale(&int(2)))
            + &(&(&s.pow(2) * &u_minus_v_sq) * &xd.pow(2));
        lhs - &(&quad * &yd.pow(2))
    }

    /// Residuals of `t x_num - x_den` and `4s^2 y_num^2 - (1 - 2s(u+v)t + s^2(u-v)^2 t^2) y_den^2`
    /// with the chart coordinate expanded in `t = 1/x` (`z^2 = (1 - sβt)/(1 - sαt)` near
    /// `z = 1`, and `w = 1/z` near `w = 1`). Both vanish identically through `order`.
    pub fn curve_identity_series(&self, chart: Chart, order: i32) -> Result<[TruncatedSeries; 2], AlgebraError> {
        let z2 = z_squared_series(order)?;
        let q = match chart {
            Chart::Zero => z2,
            Chart::Infinity => z2.invert()?,
        };
        let tal = Alphabet::new(&["a", "b", "s"]);
        // every polynomial here is even in z once squared where needed
        let eval = |p: &LaurentPolynomial| -> Result<TruncatedSeries, AlgebraError> {
            let mut out = TruncatedSeries::zero("t", &tal, order);
            for (k, c) in p.group_by(3) {
                let k = if chart == Chart::Zero { k } else { -k };
                assert!(k % 2 == 0, "odd power of z");
                let c = c.with_alphabet(&tal)?;
                out = out.add(&q.powi(k / 2)?.mul_coefficient(&c))?;
            }
            Ok(out)
        };
        let s = LaurentPolynomial::var(&tal, "s");
        let a = LaurentPolynomial::var(&tal, "a");
        let b = LaurentPolynomial::var(&tal, "b");
        let one = LaurentPolynomial::one(&tal);
        let first = eval(&self.x_num)?.shift(1).sub(&eval(&self.x_den)?)?;
        let quad = TruncatedSeries::new(
            "t",
            &tal,
            0,
            order,
            vec![one, (&s * &(&a.pow(2) + &b.pow(2))).scale(&int(-2)), &s.pow(2) * &(&a.pow(2) - &b.pow(2)).pow(2)],
        );
        let lhs = eval(&self.y_num.pow(2))?.mul_coefficient(&s.pow(2).scale(&int(4)));
        let second = lhs.sub(&quad.mul(&eval(&self.y_den.pow(2))?)?)?;
        Ok([first.truncate(order), second.truncate(order)])
    }

    /// `x(-z) = x(z)` and `y(-z) = -y(z)`.
    pub fn involution_holds(&self) -> bool {
        let neg = |p: &LaurentPolynomial| p.substitute("z", &-LaurentPolynomial::var(&Self::alphabet(), "z")).unwrap();
        neg(&self.x_num) == self.x_num
            && neg(&self.x_den) == self.x_den
            && neg(&self.y_num) == -self.y_num.clone()
            && neg(&self.y_den) == self.y_den
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Zero,
    Infinity,
}

/// `w_{g,n}` with `W_{g,n} = w_{g,n} dz_1 ... dz_n`, over `[a, b, z1..zn]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EOForm {
    pub g: u32,
    pub n: usize,
    pub poly: LaurentPolynomial,
}

impl EOForm {
    pub fn is_even(&self) -> bool {
        self.poly.terms().all(|(e, _)| e[2..].iter().all(|x| x % 2 == 0))
    }

    pub fn is_symmetric(&self) -> bool {
        let slots: Vec<usize> = (2..2 + self.n).collect();
        (0..self.n.saturating_sub(1)).all(|i| self.poly.swap_symbols(slots[i], slots[i + 1]) == self.poly)
    }

    /// The form only ever carries `a, b, z_i`.
    pub fn is_s_free(&self) -> bool {
        self.poly.alphabet() == &form_alphabet(self.n)
    }

    /// Pullback along `z_i -> 1/z_i`: `w(1/z) ∏ (-1/z_i^2)`.
    pub fn chart_dual(&self) -> EOForm {
        let mut p = self.poly.clone();
        for i in 0..self.n {
            p = p.map_exponent(2 + i, |e| -e - 2);
        }
        if self.n % 2 == 1 {
            p = -p;
        }
        EOForm { g: self.g, n: self.n, poly: p }
    }

    /// `a -> -a`, which exchanges `α` and `β`.
    pub fn swap_alpha_beta(&self) -> EOForm {
        let mut out = LaurentPolynomial::zero(self.poly.alphabet());
        for (e, c) in self.poly.terms() {
            let c = if e[0] % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_term(e.clone(), c);
        }
        EOForm { g: self.g, n: self.n, poly: out }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "g": self.g, "n": self.n, "form": self.poly })
    }
}

/// `ω_{0,2} = dz1 dz2/(z1 - z2)^2`; it only enters through its chart expansions.
#[derive(Clone, Copy, Debug, Default)]
pub struct BergmanKernel;

impl BergmanKernel {
    /// `1/(σz - z_i)^2` as a series in the chart variable (`z` at 0, `w = 1/z` at ∞),
    /// through `order`; `slot` is the index of `z_i` in `alphabet`.
    pub fn expansion(&self, chart: Chart, alphabet: &Alphabet, slot: usize, sign: i32, order: i32) -> TruncatedSeries {
        let zi = &alphabet.names()[slot];
        let mut coeffs = Vec::new();
        match chart {
            // Σ (k+1) σ^k z^k / z_i^{k+2}
            Chart::Zero => {
                for k in 0..=order.max(-1) {
                    let c = int((k + 1) as i64 * if sign < 0 && k % 2 == 1 { -1 } else { 1 });
                    coeffs.push(LaurentPolynomial::var_pow(alphabet, zi, -k - 2).scale(&c));
                }
                TruncatedSeries::new("z", alphabet, 0, order, coeffs)
            }
            // w^2 Σ (k+1) σ^k z_i^k w^k
            Chart::Infinity => {
                for k in 0..=(order - 2).max(-1) {
                    let c = int((k + 1) as i64 * if sign < 0 && k % 2 == 1 { -1 } else { 1 });
                    coeffs.push(LaurentPolynomial::var_pow(alphabet, zi, k).scale(&c));
                }
                TruncatedSeries::new("z", alphabet, 2, order, coeffs)
            }
        }
    }

    /// The diagonal value `w_{0,2}(z, -z) = 1/(4z^2)` in a chart.
    pub fn antidiagonal(&self, chart: Chart, alphabet: &Alphabet, order: i32) -> TruncatedSeries {
        let quarter = LaurentPolynomial::constant(alphabet, rat(1, 4));
        match chart {
            Chart::Zero => TruncatedSeries::new("z", alphabet, -2, order, vec![quarter]),
            Chart::Infinity => TruncatedSeries::new("z", alphabet, 2, order, vec![quarter]),
        }
    }
}

pub fn bergman_kernel() -> BergmanKernel {
    BergmanKernel
}

/// Kernel series in the integration variable over `alphabet`, with `z0` at `z0_slot`.
/// At infinity this is `k(z0, 1/w) · (-1/w^2)`, the pullback including `dz`.
fn kernel_series(
    chart: Chart,
    alphabet: &Alphabet,
    z0_slot: usize,
    swapped: bool,
    order: i32,
) -> Result<TruncatedSeries, AlgebraError> {
    let (alpha, beta) = alpha_beta(swapped);
    let lift = |p: &LaurentPolynomial| p.remap(alphabet, &[0, 1]);
    let (alpha, beta, norm) = (lift(&alpha), lift(&beta), lift(&kernel_norm()));
    let zv = alphabet.names().len() - 1;
    let z = |k: i32| {
        let mut e: Exponents = smallvec::SmallVec::from_elem(0, alphabet.len());
        e[zv] = k;
        LaurentPolynomial::monomial(alphabet, &e, Rational::one())
    };
    let z0 = |k: i32| {
        let mut e: Exponents = smallvec::SmallVec::from_elem(0, alphabet.len());
        e[z0_slot] = k;
        LaurentPolynomial::monomial(alphabet, &e, Rational::one())
    };
    let one = LaurentPolynomial::one(alphabet);
    let terms = (order + 8).max(0) / 2 + 1;
    let mut geo = LaurentPolynomial::zero(alphabet);
    let poly = match chart {
        Chart::Zero => {
            // (αz^2 - β)(z^2 - 1)^2 z^{-1} Σ z^{2k} z0^{-2k-2}
            for k in 0..terms {
                geo.add_assign_ref(&(&z(2 * k) * &z0(-2 * k - 2)));
            }
            let front = &(&(&alpha * &z(2)) - &beta) * &(&z(2) - &one).pow(2);
            &(&(&front * &z(-1)) * &geo) * &norm
        }
        Chart::Infinity => {
            // (α - βw^2)(1 - w^2)^2 w^{-5} Σ z0^{2k} w^{2k}
            for k in 0..terms {
                geo.add_assign_ref(&(&z(2 * k) * &z0(2 * k)));
            }
            let front = &(&alpha - &(&beta * &z(2))) * &(&one - &z(2)).pow(2);
            &(&(&front * &z(-5)) * &geo) * &norm
        }
    };
    TruncatedSeries::from_polynomial(&alphabet.names()[zv], &poly, order)
}

/// The recursion kernel as a series in `[a, b, z0, z]`. At zero this is `k(z0, z)` in
/// `z`; at infinity it is the dual-chart kernel `k̃(w0, w)` (`α ↔ β`) in `w`, which has
/// the same simple pole at the origin.
pub fn recursion_kernel_expansion(chart: Chart, order: i32) -> Result<TruncatedSeries, AlgebraError> {
    let al = Alphabet::new(&["a", "b", "z0", "z"]);
    match chart {
        Chart::Zero => {
            let k = kernel_series(Chart::Zero, &al, 2, false, order + 6)?;
            Ok(k.truncate(order))
        }
        Chart::Infinity => {
            let k = kernel_series(Chart::Zero, &al, 2, true, order + 6)?;
            Ok(k.truncate(order))
        }
    }
}

/// Memo of computed stable forms, filled in dependency order.
#[derive(Clone, Debug, Default)]
pub struct FormTable {
    forms: BTreeMap<(u32, usize), EOForm>,
}

impl FormTable {
    pub fn get(&self, g: u32, n: usize) -> Option<&EOForm> {
        self.forms.get(&(g, n))
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EOForm> {
        self.forms.values()
    }
}

enum Factor {
    Form(LaurentPolynomial),
    Bergman { slot: usize, sign: i32 },
    Antidiagonal,
}

pub struct EoEngine {
    table: FormTable,
    swapped: bool,
}

impl Default for EoEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl EoEngine {
    pub fn new() -> Self {
        EoEngine { table: FormTable::default(), swapped: false }
    }

    /// The same recursion on the curve read in the chart `1/z`, i.e. with `α ↔ β`.
    pub fn swapped() -> Self {
        EoEngine { table: FormTable::default(), swapped: true }
    }

    pub fn table(&self) -> &FormTable {
        &self.table
    }

    pub fn omega(&mut self, g: u32, n: usize) -> Result<EOForm, EoError> {
        if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(EoError::Unstable { g, n });
        }
        if let Some(f) = self.table.get(g, n) {
            return Ok(f.clone());
        }
        let poly = self.compute(g, n - 1)?;
        let form = EOForm { g, n, poly };
        if !form.is_even() {
            return Err(EoError::Invariant { g, n, what: "odd exponent".into() });
        }
        if !form.is_symmetric() {
            return Err(EoError::Invariant { g, n, what: "not symmetric".into() });
        }
        self.table.forms.insert((g, n), form.clone());
        Ok(form)
    }

    /// `ω_{g,n+1}` over `[a, b, z1..z_{n+1}]`, with `z1` the distinguished point.
    fn compute(&mut self, g: u32, n: usize) -> Result<LaurentPolynomial, EoError> {
        // integrand alphabet [a, b, z1..z_{n+1}, z]; label r in 1..=n sits at 2 + r
        let mut names: Vec<String> = form_alphabet(n + 1).names().to_vec();
        names.push("z".into());
        let al = Alphabet::from_vec(names);
        let zv = n + 3;

        let mut products: Vec<Vec<Factor>> = Vec::new();
        if g >= 1 {
            if g == 1 && n == 0 {
                products.push(vec![Factor::Antidiagonal]);
            } else {
                let lower = self.omega(g - 1, n + 2)?;
                let mut map = vec![0, 1, zv, zv];
                map.extend((1..=n).map(|r| 2 + r));
                products.push(vec![Factor::Form(lower.poly.remap(&al, &map))]);
            }
        }
        for h in 0..=g {
            for mask in 0u32..(1 << n) {
                let i1: Vec<usize> = (1..=n).filter(|r| mask & (1 << (r - 1)) != 0).collect();
                let i2: Vec<usize> = (1..=n).filter(|r| mask & (1 << (r - 1)) == 0).collect();
                if (h == 0 && i1.is_empty()) || (g - h == 0 && i2.is_empty()) {
                    continue;
                }
                let f1 = self.factor(h, &i1, 1, &al, zv)?;
                let f2 = self.factor(g - h, &i2, -1, &al, zv)?;
                products.push(vec![f1, f2]);
            }
        }

        let mut total = LaurentPolynomial::zero(&al);
        for chart in [Chart::Zero, Chart::Infinity] {
            total.add_assign_ref(&self.chart_residue(chart, &products, &al, zv)?);
        }
        // B carries an overall minus sign
        let total = -total;
        Ok(total.with_alphabet(&form_alphabet(n + 1))?)
    }

    fn factor(&mut self, h: u32, labels: &[usize], sign: i32, al: &Alphabet, zv: usize) -> Result<Factor, EoError> {
        if h == 0 && labels.len() == 1 {
            return Ok(Factor::Bergman { slot: 2 + labels[0], sign });
        }
        // stable forms are even, so w(-z, ...) = w(z, ...)
        let lower = self.omega(h, labels.len() + 1)?;
        let mut map = vec![0, 1, zv];
        map.extend(labels.iter().map(|r| 2 + r));
        Ok(Factor::Form(lower.poly.remap(al, &map)))
    }

    fn chart_residue(
        &self,
        chart: Chart,
        products: &[Vec<Factor>],
        al: &Alphabet,
        zv: usize,
    ) -> Result<LaurentPolynomial, AlgebraError> {
        let var = al.names()[zv].clone();
        // kernel valuation is -1 at zero and -5 at infinity (Jacobian included)
        let target = match chart {
            Chart::Zero => 0,
            Chart::Infinity => 4,
        };
        let chart_poly = |p: &LaurentPolynomial| match chart {
            Chart::Zero => p.clone(),
            Chart::Infinity => p.map_exponent(zv, |e| -e),
        };
        let valuation = |f: &Factor, p: Option<&LaurentPolynomial>| -> i32 {
            match (f, chart) {
                (Factor::Form(_), _) => p.and_then(|p| p.exponent_range(zv)).map(|r| r.0).unwrap_or(i32::MAX / 4),
                (Factor::Bergman { .. }, Chart::Zero) => 0,
                (Factor::Bergman { .. }, Chart::Infinity) => 2,
                (Factor::Antidiagonal, Chart::Zero) => -2,
                (Factor::Antidiagonal, Chart::Infinity) => 2,
            }
        };
        let bk = bergman_kernel();
        let mut b = TruncatedSeries::zero(&var, al, target);
        let mut b_val = target + 1;
        for factors in products {
            let polys: Vec<Option<LaurentPolynomial>> = factors
                .iter()
                .map(|f| match f {
                    Factor::Form(p) => Some(chart_poly(p)),
                    _ => None,
                })
                .collect();
            let vals: Vec<i32> = factors.iter().zip(&polys).map(|(f, p)| valuation(f, p.as_ref())).collect();
            let sum: i32 = vals.iter().sum();
            if sum > target {
                continue;
            }
            let mut prod: Option<TruncatedSeries> = None;
            for (i, f) in factors.iter().enumerate() {
                let order = target - (sum - vals[i]);
                let s = match f {
                    Factor::Form(_) => TruncatedSeries::from_polynomial(&var, polys[i].as_ref().unwrap(), order)?,
                    Factor::Bergman { slot, sign } => bk.expansion(chart, al, *slot, *sign, order),
                    Factor::Antidiagonal => bk.antidiagonal(chart, al, order),
                };
                prod = Some(match prod {
                    None => s,
                    Some(p) => p.mul(&s)?,
                });
            }
            let prod = prod.expect("nonempty product").truncate(target);
            b_val = b_val.min(sum);
            b = b.add(&prod)?;
        }
        if b_val > target {
            return Ok(LaurentPolynomial::zero(al));
        }
        let k = kernel_series(chart, al, 2, self.swapped, -1 - b_val)?;
        // Res = Σ_j k_j b_{-1-j}
        let mut res = LaurentPolynomial::zero(al);
        for (j, kj) in k.iter() {
            if kj.is_zero() {
                continue;
            }
            let bj = b.coefficient(-1 - j)?;
            if !bj.is_zero() {
                res.add_assign_ref(&kj.mul_ref(&bj));
            }
        }
        Ok(res)
    }
}

/// `ω_{g,n}` from a fresh engine.
pub fn eo_omega(g: u32, n: usize) -> Result<EOForm, EoError> {
    EoEngine::new().omega(g, n)
}

/// `z(t) = √((1 - sβt)/(1 - sαt))` with `t = 1/x`, over `[a, b, s]`.
pub fn z_of_x_series(order: i32) -> Result<TruncatedSeries, AlgebraError> {
    Ok(z_squared_series(order)?.sqrt()?)
}

fn z_squared_series(order: i32) -> Result<TruncatedSeries, AlgebraError> {
    let al = Alphabet::new(&["a", "b", "s"]);
    let (alpha, beta) = alpha_beta(false);
    let lift = |p: &LaurentPolynomial| p.with_alphabet(&al).expect("subset");
    let s = LaurentPolynomial::var(&al, "s");
    let one = LaurentPolynomial::one(&al);
    let num = TruncatedSeries::new("t", &al, 0, order, vec![one.clone(), -(&s * &lift(&beta))]);
    let den = TruncatedSeries::new("t", &al, 0, order, vec![one, -(&s * &lift(&alpha))]);
    num.mul(&den.invert()?)
}

/// Substitutes `z_i = z(t_i)` and multiplies by `∏ dz_i/dx_i = ∏ (-t_i^2 z'(t_i))`,
/// then rewrites `a^2 = u`, `b^2 = v`.
pub fn to_x_series(form: &EOForm, order: u32) -> Result<NPointSeries, EoError> {
    let n = form.n;
    let slot_order = order as i32 - 2 * (n as i32 - 1);
    let xal = {
        let mut names: Vec<String> = vec!["a".into(), "b".into(), "s".into()];
        names.extend((1..=n).map(|i| format!("t{i}")));
        Alphabet::from_vec(names)
    };
    let mut result = LaurentPolynomial::zero(&xal);
    if slot_order >= 2 {
        let z2 = z_squared_series(slot_order)?;
        let z = z2.sqrt()?;
        let jac = z.derivative().shift(2).neg();
        let exps: BTreeSet<i32> = form.poly.terms().flat_map(|(e, _)| e[2..].to_vec()).collect();
        let one_slot = Alphabet::new(&["a", "b", "s", "t"]);
        let mut powers: BTreeMap<i32, LaurentPolynomial> = BTreeMap::new();
        for e in exps {
            let p = z2.powi(e / 2)?.mul(&jac)?.truncate(slot_order);
            powers.insert(e, p.to_polynomial(&one_slot.clone())?);
        }
        // group by the z-exponent vector
        let mut groups: BTreeMap<Vec<i32>, LaurentPolynomial> = BTreeMap::new();
        for (e, c) in form.poly.terms() {
            let key = e[2..].to_vec();
            let mono = LaurentPolynomial::monomial(&ab(), &e[..2], c.clone());
            groups.entry(key).or_insert_with(|| LaurentPolynomial::zero(&ab())).add_assign_ref(&mono);
        }
        let tslots: Vec<usize> = (3..3 + n).collect();
        for (key, coeff) in groups {
            let mut acc = coeff.remap(&xal, &[0, 1]);
            for (i, e) in key.iter().enumerate() {
                let placed = powers[e].remap(&xal, &[0, 1, 2, 3 + i]);
                acc = acc.mul_truncated(&placed, &tslots, order as i32);
            }
            result.add_assign_ref(&acc);
        }
    }
    // a^2 -> u, b^2 -> v
    let out_al = t_alphabet(n);
    let mut converted = LaurentPolynomial::zero(&out_al);
    for (e, c) in result.terms() {
        if e[0] % 2 != 0 || e[1] % 2 != 0 || e[0] < 0 || e[1] < 0 {
            return Err(EoError::NotPolynomialInUV(format!("term a^{} b^{}", e[0], e[1])));
        }
        let mut ne: Exponents = smallvec::SmallVec::from_elem(0, out_al.len());
        ne[0] = e[2];
        ne[1] = e[0] / 2;
        ne[2] = e[1] / 2;
        ne[3..].copy_from_slice(&e[3..]);
        converted.add_term(ne, c.clone());
    }
    Ok(NPointSeries::from_polynomial(form.g, n, order, &converted)?)
}

/// EO forms pushed to the x-picture against the Virasoro recursion, coefficient by coefficient.
pub fn verify_main_theorem(g: u32, n: usize, order: u32) -> VerificationReport {
    let mut eo = EoEngine::new();
    let mut vir = VirasoroEngine::new();
    verify_main_theorem_with(&mut eo, &mut vir, g, n, order)
}

pub fn verify_main_theorem_with(
    eo: &mut EoEngine,
    vir: &mut VirasoroEngine,
    g: u32,
    n: usize,
    order: u32,
) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("main-theorem", &format!("g{g}n{n}"), order)
        .param("g", g)
        .param("n", n as u64);
    if order < 2 * n as u32 {
        return report.skipped("order below 2n").timed(start);
    }
    let x_side = eo.omega(g, n).and_then(|f| to_x_series(&f, order));
    let v_side = vir.npoint_series(g, n, order);
    match (x_side, v_side) {
        (Ok(x), Ok(v)) => {
            let (checked, d) = v.compare(&x);
            report.absorb(checked, d);
        }
        (Err(e), _) => report.fail("eo".into(), "form", &e.to_string()),
        (_, Err(e)) => report.fail("virasoro".into(), "series", &e.to_string()),
    }
    report.timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_poly(alphabet: &Alphabet, p: &LaurentPolynomial) -> LaurentPolynomial {
        p.with_alphabet(alphabet).unwrap()
    }

    fn w03_expected() -> LaurentPolynomial {
        let al = form_alphabet(3);
        let (alpha, beta) = alpha_beta(false);
        let inv = LaurentPolynomial::monomial(&al, &[-2, -2, 0, 0, 0], rat(1, 16));
        let zz = LaurentPolynomial::monomial(&al, &[0, 0, -2, -2, -2], int(1));
        (&(&ab_poly(&al, &beta) * &zz) - &ab_poly(&al, &alpha)) * inv
    }

    fn w11_expected() -> LaurentPolynomial {
        let al = form_alphabet(1);
        let (alpha, beta) = alpha_beta(false);
        let (al_, be) = (ab_poly(&al, &alpha), ab_poly(&al, &beta));
        let z = |k: i32| LaurentPolynomial::var_pow(&al, "z1", k);
        let body = &(&(&(&be * &z(-4)) - &(&(&be.scale(&int(2)) + &al_) * &z(-2))) + &(&al_.scale(&int(2)) + &be))
            - &(&al_ * &z(2));
        body * LaurentPolynomial::monomial(&al, &[-2, -2, 0], rat(1, 128))
    }

    #[test]
    fn base_forms() {
        assert_eq!(eo_omega(0, 3).unwrap().poly, w03_expected());
        assert_eq!(eo_omega(1, 1).unwrap().poly, w11_expected());
        assert!(matches!(eo_omega(0, 2), Err(EoError::Unstable { .. })));
    }

    #[test]
    fn curve_identities() {
        let c = SpectralCurveData::new();
        assert!(c.curve_identity_numerator().is_zero());
        assert!(c.involution_holds());
        for chart in [Chart::Zero, Chart::Infinity] {
            for r in c.curve_identity_series(chart, 20).unwrap() {
                assert!(r.order() >= 20);
                assert!(r.iter().all(|(_, x)| x.is_zero()));
            }
        }
    }

    #[test]
    fn kernel_leading_term_at_zero() {
        let k = recursion_kernel_expansion(Chart::Zero, 2).unwrap();
        let al = k.alphabet().clone();
        let (_, beta) = alpha_beta(false);
        // -β/(2(α-β)^2 z0^2)
        let expect = (&beta.with_alphabet(&al).unwrap() * &LaurentPolynomial::monomial(&al, &[-2, -2, -2, 0], rat(-1, 32))).clone();
        assert_eq!(k.valuation(), -1);
        assert_eq!(k.coefficient(-1).unwrap(), expect);
        let kt = recursion_kernel_expansion(Chart::Infinity, 2).unwrap();
        assert_eq!(kt.valuation(), -1);
    }

    #[test]
    fn kernel_at_infinity_is_dual_kernel() {
        // k(1/w0, 1/w) = k̃(w0, w) w0^2 / w^2, with k(z0, 1/w) = -w^2 K∞(z0, w)
        let al = Alphabet::new(&["a", "b", "z0", "z"]);
        let kinf = kernel_series(Chart::Infinity, &al, 2, false, 12).unwrap();
        let lhs = kinf.shift(4).neg();
        let lhs = TruncatedSeries::from_polynomial("z", &lhs.to_polynomial(&al).unwrap().map_exponent(2, |e| -e), 12).unwrap();
        let w0sq = LaurentPolynomial::var_pow(&al, "z0", 2);
        let rhs = recursion_kernel_expansion(Chart::Infinity, 12).unwrap().mul_coefficient(&w0sq);
        assert!(lhs.agrees_with(&rhs));
        assert_eq!(lhs.valuation(), -1);
    }

    #[test]
    fn z_of_x_leading_terms() {
        let z = z_of_x_series(3).unwrap();
        let al = Alphabet::new(&["a", "b", "s"]);
        assert_eq!(z.coefficient(0).unwrap(), LaurentPolynomial::one(&al));
        assert_eq!(z.coefficient(1).unwrap(), LaurentPolynomial::monomial(&al, &[1, 1, 1], int(-2)));
    }

    #[test]
    fn main_theorem_small() {
        for (g, n) in [(0, 3), (1, 1)] {
            let r = verify_main_theorem(g, n, 9);
            assert!(r.passed(), "{}", r.summary_line());
        }
    }

    #[test]
    fn chart_duality_on_base_forms() {
        let mut sw = EoEngine::swapped();
        for (g, n) in [(0, 3), (1, 1), (0, 4)] {
            let w = eo_omega(g, n).unwrap();
            assert_eq!(w.chart_dual(), sw.omega(g, n).unwrap(), "({g},{n})");
            assert_eq!(w.swap_alpha_beta(), sw.omega(g, n).unwrap());
        }
    }
}
