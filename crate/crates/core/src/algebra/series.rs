//! Truncated univariate Laurent series with polynomial coefficients.
//!
//! A series in `t` is stored as its coefficients from `min_exp` up to `order`
//! (inclusive). Everything above `order` is unknown, and reading there is an
//! error. Binary operations propagate the smallest order that is still exact.

use num::One;

use super::coeff::{int, Coefficient, Rational};
use super::poly::{Alphabet, LaurentPolynomial};
use super::AlgebraError;

#[derive(Clone, Debug)]
pub struct TruncatedSeries<C: Coefficient = Rational> {
    var: String,
    alphabet: Alphabet,
    min_exp: i32,
    order: i32,
    coeffs: Vec<LaurentPolynomial<C>>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Series `Σ coeffs[k] var^(min_exp + k) + O(var^(order + 1))`.
    pub fn new(
        var: &str,
        alphabet: &Alphabet,
        min_exp: i32,
        order: i32,
        coeffs: Vec<LaurentPolynomial<C>>,
    ) -> Self {
        let len = (order - min_exp + 1).max(0) as usize;
        let mut c: Vec<LaurentPolynomial<C>> = coeffs
            .into_iter()
            .take(len)
            .map(|p| p.with_alphabet(&alphabet.merge(p.alphabet())).expect("superset"))
            .collect();
        let full = c.first().map(|p| p.alphabet().clone()).unwrap_or_else(|| alphabet.clone());
        let mut c2 = Vec::with_capacity(len);
        for p in c.drain(..) {
            c2.push(p.with_alphabet(&full).expect("superset"));
        }
        while c2.len() < len {
            c2.push(LaurentPolynomial::zero(&full));
        }
        TruncatedSeries { var: var.to_string(), alphabet: full, min_exp, order, coeffs: c2 }
    }

    /// The zero series known through `order`.
    pub fn zero(var: &str, alphabet: &Alphabet, order: i32) -> Self {
        Self::new(var, alphabet, 0, order, vec![])
    }

    pub fn one(var: &str, alphabet: &Alphabet, order: i32) -> Self {
        Self::constant(var, LaurentPolynomial::one(alphabet), order)
    }

    pub fn constant(var: &str, c: LaurentPolynomial<C>, order: i32) -> Self {
        let al = c.alphabet().clone();
        Self::new(var, &al, 0, order, vec![c])
    }

    /// Series from scalar coefficients `c_k var^(min_exp + k)`.
    pub fn from_scalars(var: &str, alphabet: &Alphabet, min_exp: i32, order: i32, scalars: &[C]) -> Self {
        let coeffs = scalars.iter().map(|c| LaurentPolynomial::constant(alphabet, c.clone())).collect();
        Self::new(var, alphabet, min_exp, order, coeffs)
    }

    /// Views a polynomial as an exact series in one of its symbols, kept through `order`.
    /// The coefficients keep the full alphabet with `var`'s exponent cleared.
    pub fn from_polynomial(var: &str, p: &LaurentPolynomial<C>, order: i32) -> Result<Self, AlgebraError> {
        let idx = p.alphabet().index(var)?;
        let groups = p.group_by(idx);
        let min_exp = groups.keys().next().copied().unwrap_or(0).min(order + 1);
        let len = (order - min_exp + 1).max(0) as usize;
        let mut coeffs = vec![LaurentPolynomial::zero(p.alphabet()); len];
        for (k, piece) in groups {
            if k <= order {
                coeffs[(k - min_exp) as usize] = piece;
            }
        }
        Ok(TruncatedSeries { var: var.to_string(), alphabet: p.alphabet().clone(), min_exp, order, coeffs })
    }

    /// Folds the series back into a polynomial over `alphabet` (which must contain `var`).
    pub fn to_polynomial(&self, target: &Alphabet) -> Result<LaurentPolynomial<C>, AlgebraError> {
        let idx = target.index(&self.var)?;
        let mut out = LaurentPolynomial::zero(target);
        for (k, c) in self.iter() {
            let c = c.with_alphabet(target)?;
            if c.exponent_range(idx).is_some_and(|(lo, hi)| lo != 0 || hi != 0) {
                return Err(AlgebraError::NotExpressible(format!(
                    "coefficient already depends on {}",
                    self.var
                )));
            }
            out = out.add_ref(&c.map_exponent(idx, |_| k));
        }
        Ok(out)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// Iterates `(exponent, coefficient)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &LaurentPolynomial<C>)> {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.min_exp + k as i32, c))
    }

    /// Coefficient of `var^k`; reading above the order is an error.
    pub fn coefficient(&self, k: i32) -> Result<LaurentPolynomial<C>, AlgebraError> {
        if k > self.order {
            return Err(AlgebraError::BeyondOrder { requested: k, order: self.order });
        }
        if k < self.min_exp {
            return Ok(LaurentPolynomial::zero(&self.alphabet));
        }
        Ok(self.coeffs[(k - self.min_exp) as usize].clone())
    }

    fn coeff_ref(&self, k: i32) -> Option<&LaurentPolynomial<C>> {
        if k < self.min_exp || k > self.order {
            None
        } else {
            Some(&self.coeffs[(k - self.min_exp) as usize])
        }
    }

    /// Exponent of the first nonzero coefficient; `order + 1` for a series known to vanish.
    pub fn valuation(&self) -> i32 {
        self.iter().find(|(_, c)| !c.is_zero()).map(|(k, _)| k).unwrap_or(self.order + 1)
    }

    /// Lowers the order (never raises it).
    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let coeffs = self.coeffs.iter().take((order - self.min_exp + 1).max(0) as usize).cloned().collect();
        Self::new(&self.var, &self.alphabet, self.min_exp, order, coeffs)
    }

    fn unify(&self, other: &Self) -> Result<(Self, Self), AlgebraError> {
        if self.var != other.var {
            return Err(AlgebraError::VariableMismatch(self.var.clone(), other.var.clone()));
        }
        if self.alphabet == other.alphabet {
            return Ok((self.clone(), other.clone()));
        }
        let al = self.alphabet.merge(&other.alphabet);
        Ok((self.with_alphabet(&al)?, other.with_alphabet(&al)?))
    }

    pub fn with_alphabet(&self, al: &Alphabet) -> Result<Self, AlgebraError> {
        let coeffs = self.coeffs.iter().map(|c| c.with_alphabet(al)).collect::<Result<Vec<_>, _>>()?;
        Ok(TruncatedSeries { var: self.var.clone(), alphabet: al.clone(), min_exp: self.min_exp, order: self.order, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, AlgebraError> {
        let (a, b) = self.unify(other)?;
        let order = a.order.min(b.order);
        let lo = a.min_exp.min(b.min_exp).min(order + 1);
        let mut coeffs = Vec::new();
        for k in lo..=order {
            let x = a.coeff_ref(k).cloned().unwrap_or_else(|| LaurentPolynomial::zero(&a.alphabet));
            let y = b.coeff_ref(k).cloned().unwrap_or_else(|| LaurentPolynomial::zero(&a.alphabet));
            coeffs.push(if negate { x.sub_ref(&y) } else { x.add_ref(&y) });
        }
        Ok(Self::new(&a.var, &a.alphabet, lo, order, coeffs))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|p| p.scale(c)).collect();
        Self::new(&self.var, &self.alphabet, self.min_exp, self.order, coeffs)
    }

    /// Multiplies every coefficient by a polynomial free of `var`.
    pub fn mul_coefficient(&self, p: &LaurentPolynomial<C>) -> Self {
        let al = self.alphabet.merge(p.alphabet());
        let coeffs = self.coeffs.iter().map(|c| c.mul_ref(p)).collect();
        Self::new(&self.var, &al, self.min_exp, self.order, coeffs)
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self::new(&self.var, &self.alphabet, self.min_exp + k, self.order + k, self.coeffs.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (a, b) = self.unify(other)?;
        let va = a.valuation();
        let vb = b.valuation();
        let order = (a.order + vb).min(b.order + va);
        self.mul_to(&a, &b, order)
    }

    /// Product kept only through `order` (which must not exceed the exact order).
    pub fn mul_up_to(&self, other: &Self, order: i32) -> Result<Self, AlgebraError> {
        let (a, b) = self.unify(other)?;
        let exact = (a.order + b.valuation()).min(b.order + a.valuation());
        if order > exact {
            return Err(AlgebraError::BeyondOrder { requested: order, order: exact });
        }
        self.mul_to(&a, &b, order)
    }

    fn mul_to(&self, a: &Self, b: &Self, order: i32) -> Result<Self, AlgebraError> {
        let lo = (a.min_exp + b.min_exp).min(order + 1);
        let len = (order - lo + 1).max(0) as usize;
        let mut coeffs = vec![LaurentPolynomial::zero(&a.alphabet); len];
        for (i, ca) in a.iter() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter() {
                let k = i + j;
                if k > order {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                let slot = &mut coeffs[(k - lo) as usize];
                *slot = slot.add_ref(&ca.mul_ref(cb));
            }
        }
        Ok(Self::new(&a.var, &a.alphabet, lo, order, coeffs))
    }

    /// Splits off the leading term: `self = lead · var^v · (1 + rest)`.
    fn normalized(&self) -> Result<(i32, LaurentPolynomial<C>, Self), AlgebraError> {
        let v = self.valuation();
        if v > self.order {
            return Err(AlgebraError::NonUnitConstant("series is zero to its order".into()));
        }
        let lead = self.coefficient(v)?;
        let inv = lead.inverse_monomial().ok_or_else(|| {
            AlgebraError::NonUnitConstant(format!("leading coefficient {lead} is not a unit"))
        })?;
        let rest = self.shift(-v).mul_coefficient(&inv);
        Ok((v, lead, rest))
    }

    /// Multiplicative inverse. The leading coefficient must be a unit (a monomial).
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let (v, lead, unit) = self.normalized()?;
        // unit = 1 + h, inverse by g_k = -Σ_{i=1..k} h_i g_{k-i}
        let n = unit.order;
        let al = unit.alphabet.clone();
        let mut g: Vec<LaurentPolynomial<C>> = vec![LaurentPolynomial::one(&al)];
        for k in 1..=n {
            let mut acc = LaurentPolynomial::zero(&al);
            for i in 1..=k {
                let hi = unit.coeff_ref(i).unwrap();
                if !hi.is_zero() {
                    acc = acc.sub_ref(&hi.mul_ref(&g[(k - i) as usize]));
                }
            }
            g.push(acc);
        }
        let inv_unit = Self::new(&self.var, &al, 0, n, g);
        let inv_lead = lead.inverse_monomial().unwrap();
        Ok(inv_unit.mul_coefficient(&inv_lead).shift(-v))
    }

    /// Square root of a series whose constant term is exactly 1.
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        let c0 = self.coefficient(0)?;
        if self.valuation() < 0 || c0 != LaurentPolynomial::one(c0.alphabet()) {
            return Err(AlgebraError::NonUnitConstant(format!(
                "square root needs constant term 1, found {c0}"
            )));
        }
        let n = self.order;
        let al = self.alphabet.clone();
        let half = C::from_rational(&Rational::new(1.into(), 2.into()));
        let mut g: Vec<LaurentPolynomial<C>> = vec![LaurentPolynomial::one(&al)];
        for k in 1..=n {
            let mut acc = self.coeff_ref(k).unwrap().clone();
            for i in 1..k {
                acc = acc.sub_ref(&g[i as usize].mul_ref(&g[(k - i) as usize]));
            }
            g.push(acc.scale(&half));
        }
        Ok(Self::new(&self.var, &al, 0, n, g))
    }

    /// Integer power; negative powers go through [`Self::invert`].
    pub fn powi(&self, n: i32) -> Result<Self, AlgebraError> {
        if n < 0 {
            return self.invert()?.powi(-n);
        }
        let mut acc: Option<Self> = None;
        for _ in 0..n {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.mul(self)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Self::one(&self.var, &self.alphabet, self.order - self.valuation())))
    }

    /// Derivative in the series variable.
    pub fn derivative(&self) -> Self {
        let coeffs: Vec<LaurentPolynomial<C>> =
            self.iter().map(|(k, c)| c.scale(&C::from_int(k as i64))).collect();
        if self.min_exp == 0 {
            // constant term drops, everything shifts down by one
            let coeffs = coeffs.into_iter().skip(1).collect();
            return Self::new(&self.var, &self.alphabet, 0, self.order - 1, coeffs);
        }
        Self::new(&self.var, &self.alphabet, self.min_exp - 1, self.order - 1, coeffs)
    }

    /// Substitutes `inner` (a series in another variable with positive valuation)
    /// for this series' variable. Negative exponents are not supported.
    pub fn compose(&self, inner: &Self) -> Result<Self, AlgebraError> {
        let v = inner.valuation();
        if v < 1 {
            return Err(AlgebraError::Valuation(format!(
                "inner series must have positive valuation, found {v}"
            )));
        }
        if self.min_exp < 0 {
            return Err(AlgebraError::Valuation("outer series has negative exponents".into()));
        }
        let al = self.alphabet.merge(&inner.alphabet);
        let inner = inner.with_alphabet(&al)?;
        let mut order = v * (self.order + 1) - 1;
        if self.iter().any(|(k, c)| k >= 1 && !c.is_zero()) {
            order = order.min(inner.order);
        }
        let mut acc = Self::zero(&inner.var, &al, order);
        let mut power = Self::one(&inner.var, &al, order);
        for k in 0..=self.order {
            if k > 0 {
                power = power.mul(&inner)?.truncate(order);
            }
            let c = self.coefficient(k)?.with_alphabet(&al)?;
            if !c.is_zero() {
                acc = acc.add(&power.mul_coefficient(&c).truncate(order))?;
            }
            if k * v > order {
                break;
            }
        }
        Ok(acc.truncate(order))
    }

    /// Coefficient of `var^-1`.
    pub fn residue(&self) -> Result<LaurentPolynomial<C>, AlgebraError> {
        if self.order < -1 {
            return Err(AlgebraError::ResidueOutOfWindow { min_exp: self.min_exp, order: self.order });
        }
        self.coefficient(-1)
    }

    /// Exact equality through the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.iter().all(|(_, c)| c.is_zero()),
            Err(_) => false,
        }
    }

    /// Coefficients as scalars when each is constant.
    pub fn scalars(&self) -> Option<Vec<C>> {
        self.coeffs.iter().map(|c| c.is_constant().then(|| c.constant_term())).collect()
    }
}

/// `(1 + x)^{p}` for rational `p`, as a series in `var` to `order`.
pub fn binomial_series(var: &str, alphabet: &Alphabet, power: &Rational, order: i32) -> TruncatedSeries<Rational> {
    let mut coeffs = Vec::new();
    let mut c = Rational::one();
    for k in 0..=order.max(0) {
        coeffs.push(c.clone());
        c = c * (power - int(k as i64)) / int(k as i64 + 1);
    }
    TruncatedSeries::from_scalars(var, alphabet, 0, order, &coeffs)
}

/// Residue of a series (free function form).
pub fn residue_coefficient<C: Coefficient>(f: &TruncatedSeries<C>) -> Result<LaurentPolynomial<C>, AlgebraError> {
    f.residue()
}

impl<C: Coefficient> PartialEq for TruncatedSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.order == other.order && self.agrees_with(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::rat;

    fn empty() -> Alphabet {
        Alphabet::new::<&str>(&[])
    }

    fn scalar_series(min: i32, order: i32, cs: &[i64]) -> TruncatedSeries {
        let cs: Vec<Rational> = cs.iter().map(|&c| int(c)).collect();
        TruncatedSeries::from_scalars("t", &empty(), min, order, &cs)
    }

    #[test]
    fn sqrt_one_minus_4t() {
        let f = scalar_series(0, 4, &[1, -4]);
        let g = f.sqrt().unwrap();
        // binomial oracle (1+x)^(1/2) with x = -4t
        let oracle = binomial_series("x", &empty(), &rat(1, 2), 4).scalars().unwrap();
        let expect: Vec<Rational> = oracle.iter().enumerate().map(|(k, c)| c * int((-4i64).pow(k as u32))).collect();
        assert_eq!(g.scalars().unwrap(), expect);
        assert_eq!(g.scalars().unwrap(), vec![int(1), int(-2), int(-2), int(-4), int(-10)]);
    }

    #[test]
    fn sqrt_of_one() {
        let f = scalar_series(0, 5, &[1]);
        assert_eq!(f.sqrt().unwrap(), f);
    }

    #[test]
    fn sqrt_rejects_non_unit_constant() {
        assert!(matches!(scalar_series(0, 3, &[4, 1]).sqrt(), Err(AlgebraError::NonUnitConstant(_))));
        assert!(scalar_series(1, 3, &[1]).sqrt().is_err());
    }

    #[test]
    fn sqrt_of_dessin_discriminant() {
        let al = Alphabet::new(&["u", "v"]);
        let u = LaurentPolynomial::<Rational>::var(&al, "u");
        let v = LaurentPolynomial::var(&al, "v");
        let f = TruncatedSeries::new(
            "z",
            &al,
            0,
            2,
            vec![LaurentPolynomial::one(&al), (&u + &v).scale(&int(-2)), (&u - &v).pow(2)],
        );
        let g = f.sqrt().unwrap();
        assert_eq!(g.coefficient(1).unwrap(), -(&u + &v));
        assert_eq!(g.coefficient(2).unwrap(), (&u * &v).scale(&int(-2)));
        assert!(g.mul(&g).unwrap().agrees_with(&f));
    }

    #[test]
    fn geometric_inverse() {
        let f = scalar_series(0, 3, &[1, -1]);
        assert_eq!(f.invert().unwrap().scalars().unwrap(), vec![int(1); 4]);
        let one = scalar_series(0, 3, &[1]);
        assert_eq!(one.invert().unwrap(), one);
        assert!(scalar_series(0, 3, &[0]).invert().is_err());
    }

    #[test]
    fn inverse_with_valuation_shift() {
        // 1/(2z - z^2) = (1/(2z)) (1 + z/2 + z^2/4 + ...)
        let f = scalar_series(1, 4, &[2, -1]);
        let g = f.invert().unwrap();
        assert_eq!(g.min_exp(), -1);
        assert_eq!(g.coefficient(-1).unwrap().constant_term(), rat(1, 2));
        assert_eq!(g.coefficient(1).unwrap().constant_term(), rat(1, 8));
        assert!(f.mul(&g).unwrap().agrees_with(&scalar_series(0, 2, &[1])));
    }

    #[test]
    fn compose_geometric_with_quadratic() {
        let outer = TruncatedSeries::from_scalars("y", &empty(), 0, 2, &[int(1), int(1), int(1)]);
        let inner = TruncatedSeries::from_scalars("x", &empty(), 0, 2, &[int(0), int(2), int(1)]);
        let h = outer.compose(&inner).unwrap();
        assert_eq!(h.var(), "x");
        assert_eq!(h.order(), 2);
        // direct expansion: 1 + (2x+x^2) + (2x+x^2)^2 = 1 + 2x + 5x^2 + ...
        assert_eq!(h.scalars().unwrap(), vec![int(1), int(2), int(5)]);
        let bad = TruncatedSeries::from_scalars("x", &empty(), 0, 2, &[int(1), int(1)]);
        assert!(matches!(outer.compose(&bad), Err(AlgebraError::Valuation(_))));
    }

    #[test]
    fn residues() {
        let f = scalar_series(-1, 1, &[3, 5, 1]);
        assert_eq!(f.residue().unwrap().constant_term(), int(3));
        let g = scalar_series(-2, 0, &[1]);
        assert!(g.residue().unwrap().is_zero());
        let h = scalar_series(-3, -2, &[1]);
        assert!(matches!(h.residue(), Err(AlgebraError::ResidueOutOfWindow { .. })));
    }

    #[test]
    fn residue_of_geometric_kernel() {
        // (beta/z) / (1 - z^2/z0^2) at z = 0
        let al = Alphabet::new(&["beta", "z0"]);
        let beta = LaurentPolynomial::<Rational>::var(&al, "beta");
        let geo = TruncatedSeries::new(
            "z",
            &al,
            0,
            4,
            vec![
                LaurentPolynomial::one(&al),
                LaurentPolynomial::zero(&al),
                LaurentPolynomial::var_pow(&al, "z0", -2),
                LaurentPolynomial::zero(&al),
                LaurentPolynomial::var_pow(&al, "z0", -4),
            ],
        );
        let f = geo.mul_coefficient(&beta).shift(-1);
        assert_eq!(residue_coefficient(&f).unwrap(), beta);
    }

    #[test]
    fn reading_beyond_order_is_an_error() {
        let f = scalar_series(0, 2, &[1, 1, 1]);
        assert!(matches!(f.coefficient(3), Err(AlgebraError::BeyondOrder { .. })));
        let g = scalar_series(0, 5, &[1, 2]);
        assert_eq!(f.mul(&g).unwrap().order(), 2);
    }

    #[test]
    fn polynomial_round_trip() {
        let al = Alphabet::new(&["t", "c"]);
        let p = &LaurentPolynomial::<Rational>::var_pow(&al, "t", -1) + &LaurentPolynomial::var_pow(&al, "c", 2);
        let s = TruncatedSeries::from_polynomial("t", &p, 3).unwrap();
        assert_eq!(s.min_exp(), -1);
        assert_eq!(s.to_polynomial(&al).unwrap(), p);
    }
}
