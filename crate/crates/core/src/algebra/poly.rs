//! Sparse multivariate Laurent polynomials over an exact coefficient field.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::coeff::{Coefficient, Rational};
use super::AlgebraError;

/// Exponent vector, one entry per alphabet symbol; entries may be negative.
pub type Exponents = SmallVec<[i32; 10]>;

/// Ordered list of symbol names shared by every term of a polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Alphabet(names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into())
    }

    pub fn from_vec(names: Vec<String>) -> Self {
        Alphabet(names.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|s| s == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// `self` followed by the symbols of `other` not already present.
    pub fn merge(&self, other: &Alphabet) -> Alphabet {
        if self == other {
            return self.clone();
        }
        let mut names: Vec<String> = self.0.to_vec();
        for n in other.0.iter() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        Alphabet::from_vec(names)
    }

    /// Alphabet with one more symbol appended.
    pub fn with(&self, name: &str) -> Alphabet {
        let mut names = self.0.to_vec();
        names.push(name.to_string());
        Alphabet::from_vec(names)
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index_of(name).ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }
}

/// Exact multivariate Laurent polynomial. No zero coefficient is ever stored.
#[derive(Clone, Debug)]
pub struct LaurentPolynomial<C: Coefficient = Rational> {
    alphabet: Alphabet,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coefficient> LaurentPolynomial<C> {
    pub fn zero(alphabet: &Alphabet) -> Self {
        LaurentPolynomial { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alphabet: &Alphabet) -> Self {
        Self::constant(alphabet, C::one())
    }

    pub fn constant(alphabet: &Alphabet, c: C) -> Self {
        Self::monomial(alphabet, &vec![0; alphabet.len()], c)
    }

    pub fn monomial(alphabet: &Alphabet, exps: &[i32], c: C) -> Self {
        assert_eq!(exps.len(), alphabet.len(), "exponent vector length must match alphabet");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::from_slice(exps), c);
        }
        LaurentPolynomial { alphabet: alphabet.clone(), terms }
    }

    /// The symbol `name` raised to `power`.
    pub fn var_pow(alphabet: &Alphabet, name: &str, power: i32) -> Self {
        let idx = alphabet.index_of(name).unwrap_or_else(|| panic!("symbol {name} not in alphabet"));
        let mut e = vec![0; alphabet.len()];
        e[idx] = power;
        Self::monomial(alphabet, &e, C::one())
    }

    pub fn var(alphabet: &Alphabet, name: &str) -> Self {
        Self::var_pow(alphabet, name, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, C)>>(alphabet: &Alphabet, terms: I) -> Self {
        let mut p = Self::zero(alphabet);
        for (e, c) in terms {
            assert_eq!(e.len(), alphabet.len());
            p.add_term(e, c);
        }
        p
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&vec![0; self.alphabet.len()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Adds `c · x^e` in place.
    pub fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn aligned<'a>(&'a self, other: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        if self.alphabet == other.alphabet {
            return (Cow::Borrowed(self), Cow::Borrowed(other));
        }
        let merged = self.alphabet.merge(&other.alphabet);
        let a = self.with_alphabet(&merged).expect("merged alphabet is a superset");
        let b = other.with_alphabet(&merged).expect("merged alphabet is a superset");
        (Cow::Owned(a), Cow::Owned(b))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = a.into_owned();
        for (e, c) in b.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// `self += other`, in place when the alphabets already agree.
    pub fn add_assign_ref(&mut self, other: &Self) {
        if self.alphabet != other.alphabet {
            *self = self.add_ref(other);
            return;
        }
        for (e, c) in other.terms.iter() {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = a.into_owned();
        for (e, c) in b.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = Self::zero(&a.alphabet);
        if a.is_zero() || b.is_zero() {
            return out;
        }
        let mut acc: std::collections::HashMap<Exponents, C> =
            std::collections::HashMap::with_capacity(a.len() * b.len());
        for (ea, ca) in a.terms.iter() {
            for (eb, cb) in b.terms.iter() {
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let c = ca.clone() * cb.clone();
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let s = o.get().clone() + c;
                        *o.get_mut() = s;
                    }
                }
            }
        }
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alphabet);
        }
        LaurentPolynomial {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.alphabet);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Inverse of a single-term polynomial.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let inv = c.inverse()?;
        let e: Exponents = e.iter().map(|x| -x).collect();
        Some(Self::monomial(&self.alphabet, &e, inv))
    }

    /// Integer power, negative powers only for monomials.
    pub fn powi(&self, n: i32) -> Result<Self, AlgebraError> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            let inv = self.inverse_monomial().ok_or(AlgebraError::NotInvertible)?;
            Ok(inv.pow((-n) as u32))
        }
    }

    /// Re-expresses over `target`; symbols missing from `target` must not occur.
    pub fn with_alphabet(&self, target: &Alphabet) -> Result<Self, AlgebraError> {
        if &self.alphabet == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.alphabet.len());
        for name in self.alphabet.names() {
            map.push(target.index_of(name));
        }
        let mut out = Self::zero(target);
        for (e, c) in self.terms.iter() {
            let mut ne: Exponents = SmallVec::from_elem(0, target.len());
            for (i, &x) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] += x,
                    None if x == 0 => {}
                    None => return Err(AlgebraError::UnknownSymbol(self.alphabet.names()[i].clone())),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Moves symbol `i` to position `map[i]` of `target`; symbols that land on the
    /// same position have their exponents added (diagonal evaluation).
    pub fn remap(&self, target: &Alphabet, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.alphabet.len());
        let mut out = Self::zero(target);
        for (e, c) in self.terms.iter() {
            let mut ne: Exponents = SmallVec::from_elem(0, target.len());
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] += x;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Smallest and largest exponent of `var` over all terms.
    pub fn exponent_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    /// Splits by the exponent of `var`; the pieces have that exponent cleared.
    pub fn group_by(&self, var: usize) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (e, c) in self.terms.iter() {
            let k = e[var];
            let mut ne = e.clone();
            ne[var] = 0;
            out.entry(k).or_insert_with(|| Self::zero(&self.alphabet)).terms.insert(ne, c.clone());
        }
        out
    }

    /// Applies `f` to every exponent of `var`.
    pub fn map_exponent<F: Fn(i32) -> i32>(&self, var: usize, f: F) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in self.terms.iter() {
            let mut ne = e.clone();
            ne[var] = f(e[var]);
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Divides every exponent of `var` by `k`, failing if one is not a multiple.
    pub fn divide_exponent(&self, var: usize, k: i32) -> Result<Self, AlgebraError> {
        if let Some((e, _)) = self.terms.iter().find(|(e, _)| e[var] % k != 0) {
            return Err(AlgebraError::NotExpressible(format!(
                "exponent {} of {} is not a multiple of {k}",
                e[var],
                self.alphabet.names()[var]
            )));
        }
        Ok(self.map_exponent(var, |x| x / k))
    }

    /// Replaces `var` by the polynomial `value` (negative powers need a monomial).
    pub fn substitute(&self, var: &str, value: &Self) -> Result<Self, AlgebraError> {
        let idx = self.alphabet.index(var)?;
        let value = value.with_alphabet(&self.alphabet.merge(value.alphabet()))?;
        let base = self.with_alphabet(value.alphabet())?;
        let mut out = Self::zero(value.alphabet());
        let mut powers: BTreeMap<i32, Self> = BTreeMap::new();
        for (k, piece) in base.group_by(idx) {
            if !powers.contains_key(&k) {
                powers.insert(k, value.powi(k)?);
            }
            out = out.add_ref(&piece.mul_ref(&powers[&k]));
        }
        Ok(out)
    }

    /// Substitutes a scalar for `var`.
    pub fn evaluate(&self, var: &str, value: &C) -> Result<Self, AlgebraError> {
        self.substitute(var, &Self::constant(&self.alphabet, value.clone()))
    }

    /// Partial derivative in `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in self.terms.iter() {
            if e[var] != 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                out.add_term(ne, c.clone() * C::from_int(e[var] as i64));
            }
        }
        out
    }

    /// Drops every term whose degree in `vars` exceeds `max`.
    pub fn truncate_degree(&self, vars: &[usize], max: i32) -> Self {
        LaurentPolynomial {
            alphabet: self.alphabet.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().map(|&v| e[v]).sum::<i32>() <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated to degree `max` in `vars`; every exponent of those
    /// symbols must be nonnegative in both factors.
    pub fn mul_truncated(&self, other: &Self, vars: &[usize], max: i32) -> Self {
        let (a, b) = self.aligned(other);
        let deg = |e: &Exponents| vars.iter().map(|&v| e[v]).sum::<i32>();
        let mut acc: std::collections::HashMap<Exponents, C> = std::collections::HashMap::new();
        let bt: Vec<(&Exponents, &C, i32)> = b.terms.iter().map(|(e, c)| (e, c, deg(e))).collect();
        for (ea, ca) in a.terms.iter() {
            let da = deg(ea);
            if da > max {
                continue;
            }
            for &(eb, cb, db) in bt.iter() {
                if da + db > max {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let c = ca.clone() * cb.clone();
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let s = o.get().clone() + c;
                        *o.get_mut() = s;
                    }
                }
            }
        }
        LaurentPolynomial {
            alphabet: a.alphabet.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Exact quotient by `(x_i - x_j)`; errors when the division leaves a remainder.
    /// Exponents of `x_i` must be nonnegative.
    pub fn divide_by_difference(&self, i: usize, j: usize) -> Result<Self, AlgebraError> {
        let by_i = self.group_by(i);
        let Some((&lo, _)) = by_i.iter().next() else {
            return Ok(self.clone());
        };
        if lo < 0 {
            return Err(AlgebraError::NotExpressible("negative exponent in division variable".into()));
        }
        let top = *by_i.keys().next_back().unwrap();
        let xj = Self::var_pow(&self.alphabet, &self.alphabet.names()[j].clone(), 1);
        let mut quotient = Self::zero(&self.alphabet);
        // synthetic division: q_{k-1} = c_k + x_j q_k
        let mut carry = Self::zero(&self.alphabet);
        for k in (1..=top).rev() {
            let ck = by_i.get(&k).cloned().unwrap_or_else(|| Self::zero(&self.alphabet));
            carry = ck.add_ref(&xj.mul_ref(&carry));
            quotient = quotient.add_ref(&carry.map_exponent(i, |_| k - 1));
        }
        let c0 = by_i.get(&0).cloned().unwrap_or_else(|| Self::zero(&self.alphabet));
        let remainder = c0.add_ref(&xj.mul_ref(&carry));
        if !remainder.is_zero() {
            return Err(AlgebraError::NotExpressible(format!(
                "not divisible by ({} - {})",
                self.alphabet.names()[i],
                self.alphabet.names()[j]
            )));
        }
        Ok(quotient)
    }

    /// Exchanges the exponents of two symbols.
    pub fn swap_symbols(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in self.terms.iter() {
            let mut ne = e.clone();
            ne.swap(i, j);
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Permutes the listed symbols: symbol `slots[k]` receives the exponent of `slots[perm[k]]`.
    pub fn permute_symbols(&self, slots: &[usize], perm: &[usize]) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in self.terms.iter() {
            let mut ne = e.clone();
            for (k, &s) in slots.iter().enumerate() {
                ne[s] = e[slots[perm[k]]];
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn map_coefficients<D: Coefficient, F: Fn(&C) -> D>(&self, f: F) -> LaurentPolynomial<D> {
        let mut out = LaurentPolynomial::<D>::zero(&self.alphabet);
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Exponent-wise minimum over all terms (the largest monomial dividing `self`).
    pub fn min_exponents(&self) -> Option<Exponents> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for (a, &x) in acc.iter_mut().zip(e.iter()) {
                *a = (*a).min(x);
            }
            acc
        }))
    }

    /// Human rendering: terms by total degree, then lexicographically.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: i32 = a.iter().sum();
            let db: i32 = b.iter().sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        let mut out = String::new();
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mut mono: Vec<String> = Vec::new();
            for (name, &x) in self.alphabet.names().iter().zip(e.iter()) {
                match x {
                    0 => {}
                    1 => mono.push(name.clone()),
                    _ => mono.push(format!("{name}^{x}")),
                }
            }
            let mut ctext = c.to_text();
            let negative = !c.is_compound() && ctext.starts_with('-');
            if negative {
                ctext.remove(0);
            }
            if c.is_compound() {
                ctext = format!("({ctext})");
            }
            let body = if mono.is_empty() {
                ctext
            } else if ctext == "1" {
                mono.join("*")
            } else {
                format!("{ctext}*{}", mono.join("*"))
            };
            match (idx, negative) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

impl<C: Coefficient> PartialEq for LaurentPolynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.alphabet == other.alphabet {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl<C: Coefficient> fmt::Display for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<C: Coefficient> $tr<&LaurentPolynomial<C>> for &LaurentPolynomial<C> {
            type Output = LaurentPolynomial<C>;
            fn $m(self, rhs: &LaurentPolynomial<C>) -> LaurentPolynomial<C> {
                self.$f(rhs)
            }
        }
        impl<C: Coefficient> $tr for LaurentPolynomial<C> {
            type Output = LaurentPolynomial<C>;
            fn $m(self, rhs: LaurentPolynomial<C>) -> LaurentPolynomial<C> {
                self.$f(&rhs)
            }
        }
        impl<C: Coefficient> $tr<&LaurentPolynomial<C>> for LaurentPolynomial<C> {
            type Output = LaurentPolynomial<C>;
            fn $m(self, rhs: &LaurentPolynomial<C>) -> LaurentPolynomial<C> {
                self.$f(rhs)
            }
        }
        impl<C: Coefficient> $tr<LaurentPolynomial<C>> for &LaurentPolynomial<C> {
            type Output = LaurentPolynomial<C>;
            fn $m(self, rhs: LaurentPolynomial<C>) -> LaurentPolynomial<C> {
                self.$f(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl<C: Coefficient> Neg for LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn neg(self) -> Self {
        self.scale(&-C::one())
    }
}

impl<C: Coefficient> Neg for &LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn neg(self) -> LaurentPolynomial<C> {
        self.scale(&-C::one())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: Vec<i32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    alphabet: Vec<String>,
    terms: Vec<TermJson>,
}

impl<C: Coefficient> Serialize for LaurentPolynomial<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let json = PolyJson {
            alphabet: self.alphabet.names().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { e: e.to_vec(), c: c.to_json_string() })
                .collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for LaurentPolynomial<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = PolyJson::deserialize(deserializer)?;
        let alphabet = Alphabet::from_vec(json.alphabet);
        let mut p = LaurentPolynomial::zero(&alphabet);
        for t in json.terms {
            if t.e.len() != alphabet.len() {
                return Err(D::Error::custom("exponent vector length does not match alphabet"));
            }
            let c = C::parse_json_string(&t.c).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficient stored"));
            }
            let e = Exponents::from_vec(t.e);
            if p.terms.contains_key(&e) {
                return Err(D::Error::custom("duplicate exponent vector"));
            }
            p.terms.insert(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{int, rat, GaussianRational};

    fn sym(names: &[&str]) -> Alphabet {
        Alphabet::new(names)
    }

    #[test]
    fn difference_of_squares() {
        let al = sym(&["u", "v"]);
        let u = LaurentPolynomial::<Rational>::var(&al, "u");
        let v = LaurentPolynomial::var(&al, "v");
        let lhs = (&u + &v) * (&u - &v);
        assert_eq!(lhs, &u.pow(2) - &v.pow(2));
    }

    #[test]
    fn alpha_beta_product() {
        let al = sym(&["a", "b"]);
        let a = LaurentPolynomial::<Rational>::var(&al, "a");
        let b = LaurentPolynomial::var(&al, "b");
        let prod = (&a + &b).pow(2) * (&a - &b).pow(2);
        let expect = a.pow(4) - a.pow(2) * b.pow(2).scale(&int(2)) + b.pow(4);
        assert_eq!(prod, expect);
        // alpha*beta = (u-v)^2 under u = a^2, v = b^2
        let uv = sym(&["u", "v"]);
        let u = LaurentPolynomial::<Rational>::var(&uv, "u");
        let v = LaurentPolynomial::var(&uv, "v");
        let sub = (&u - &v)
            .pow(2)
            .substitute("u", &a.pow(2))
            .unwrap()
            .substitute("v", &b.pow(2))
            .unwrap()
            .with_alphabet(&al)
            .unwrap();
        assert_eq!(prod, sub);
    }

    #[test]
    fn suv_times_s_u_plus_v() {
        let al = sym(&["s", "u", "v"]);
        let s = LaurentPolynomial::<Rational>::var(&al, "s");
        let u = LaurentPolynomial::var(&al, "u");
        let v = LaurentPolynomial::var(&al, "v");
        let lhs = (&s * &u * v.clone()) * (&s * &(&u + &v));
        let expect = &s.pow(2) * &u.pow(2) * v.clone() + s.pow(2) * u.clone() * v.pow(2);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn auto_merged_alphabets() {
        let x = LaurentPolynomial::<Rational>::var(&sym(&["x"]), "x");
        let y = LaurentPolynomial::<Rational>::var(&sym(&["y"]), "y");
        let p = &x + &y;
        assert_eq!(p.alphabet().names(), &["x".to_string(), "y".to_string()]);
        assert_eq!(p.clone() - y.clone(), x);
    }

    #[test]
    fn negative_powers_and_inverse() {
        let al = sym(&["z"]);
        let z = LaurentPolynomial::<Rational>::var(&al, "z");
        let zi = z.inverse_monomial().unwrap();
        assert_eq!(&z * &zi, LaurentPolynomial::one(&al));
        assert!((&z + &zi).inverse_monomial().is_none());
        assert_eq!(z.powi(-3).unwrap(), LaurentPolynomial::var_pow(&al, "z", -3));
    }

    #[test]
    fn difference_division() {
        let al = sym(&["x", "y", "c"]);
        let x = LaurentPolynomial::<Rational>::var(&al, "x");
        let y = LaurentPolynomial::var(&al, "y");
        let c = LaurentPolynomial::var_pow(&al, "c", -2);
        let q = &(&x.pow(3) + &(&y * &c)) + &LaurentPolynomial::constant(&al, rat(1, 3));
        let p = &(&x - &y) * &q;
        assert_eq!(p.divide_by_difference(0, 1).unwrap(), q);
        assert!((&x + &y).divide_by_difference(0, 1).is_err());
    }

    #[test]
    fn text_rendering() {
        let al = sym(&["s", "u", "v"]);
        let s = LaurentPolynomial::<Rational>::var(&al, "s");
        let u = LaurentPolynomial::var(&al, "u");
        let p = s.scale(&rat(1, 2)) - u.pow(2).scale(&int(3)) + LaurentPolynomial::constant(&al, int(-1));
        assert_eq!(p.to_text(), "-1 + 1/2*s - 3*u^2");
        let g = LaurentPolynomial::<GaussianRational>::constant(&al, GaussianRational::new(int(1), int(-2)));
        assert_eq!(g.to_text(), "(1-2*i)");
    }

    #[test]
    fn json_schema_is_sorted_and_round_trips() {
        let al = sym(&["s", "u", "v"]);
        let s = LaurentPolynomial::<Rational>::var(&al, "s");
        let v = LaurentPolynomial::var(&al, "v");
        let p = &v.pow(2) + &s.scale(&rat(-3, 2));
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"alphabet":["s","u","v"],"terms":[{"e":[0,0,2],"c":"1/1"},{"e":[1,0,0],"c":"-3/2"}]}"#
        );
        let back: LaurentPolynomial<Rational> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"alphabet":["s"],"terms":[{"e":[0,1],"c":"1/1"}]}"#;
        assert!(serde_json::from_str::<LaurentPolynomial<Rational>>(bad).is_err());
    }
}
