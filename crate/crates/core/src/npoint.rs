//! Truncated n-point functions `G_{g,n}` in inverse powers of `x_1..x_n`.
//!
//! The coefficient of `∏ x_i^{-a_i-1}` is stored under the ordered tuple
//! `(a_1, ..., a_n)`. Internally the series is also handled as a polynomial
//! in `t_i = 1/x_i` over the alphabet `[s, u, v, t1, ..., tn]`.

use std::collections::BTreeMap;

use serde_json::json;

use crate::algebra::{AlgebraError, Alphabet, LaurentPolynomial};
use crate::report::Discrepancy;

/// The dessin weight alphabet `[s, u, v]`.
pub fn suv_alphabet() -> Alphabet {
    Alphabet::new(&["s", "u", "v"])
}

/// `[s, u, v, t1, ..., tn]`.
pub fn t_alphabet(n: usize) -> Alphabet {
    let mut names: Vec<String> = vec!["s".into(), "u".into(), "v".into()];
    names.extend((1..=n).map(|i| format!("t{i}")));
    Alphabet::from_vec(names)
}

/// Indices of `t1..tn` inside [`t_alphabet`].
pub fn t_slots(n: usize) -> Vec<usize> {
    (3..3 + n).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NPointSeries {
    pub genus: u32,
    pub n: usize,
    /// Largest total degree `Σ(a_i + 1)` that is known.
    pub order: u32,
    pub coefficients: BTreeMap<Vec<u32>, LaurentPolynomial>,
}

impl NPointSeries {
    pub fn new(genus: u32, n: usize, order: u32) -> Self {
        NPointSeries { genus, n, order, coefficients: BTreeMap::new() }
    }

    /// Coefficient at an ordered tuple; zero when absent. Panics above the order.
    pub fn coefficient(&self, tuple: &[u32]) -> LaurentPolynomial {
        assert_eq!(tuple.len(), self.n);
        assert!(tuple.iter().map(|a| a + 1).sum::<u32>() <= self.order, "beyond order");
        self.coefficients.get(tuple).cloned().unwrap_or_else(|| LaurentPolynomial::zero(&suv_alphabet()))
    }

    pub fn insert(&mut self, tuple: Vec<u32>, value: LaurentPolynomial) {
        if !value.is_zero() {
            self.coefficients.insert(tuple, value);
        }
    }

    /// Reads a polynomial over `[s, u, v, t1..tn]`, keeping total t-degree `<= order`.
    pub fn from_polynomial(genus: u32, n: usize, order: u32, p: &LaurentPolynomial) -> Result<Self, AlgebraError> {
        let al = t_alphabet(n);
        let p = p.with_alphabet(&al)?;
        let mut out = NPointSeries::new(genus, n, order);
        let suv = suv_alphabet();
        for (e, c) in p.terms() {
            let ts = &e[3..3 + n];
            if ts.iter().sum::<i32>() > order as i32 {
                continue;
            }
            if ts.iter().any(|&x| x < 2) {
                return Err(AlgebraError::NotExpressible(format!(
                    "t-exponents {ts:?} are not of the form a+1 with a >= 1"
                )));
            }
            let tuple: Vec<u32> = ts.iter().map(|&x| (x - 1) as u32).collect();
            let mono = LaurentPolynomial::monomial(&suv, &e[..3], c.clone());
            let slot = out.coefficients.entry(tuple).or_insert_with(|| LaurentPolynomial::zero(&suv));
            *slot = slot.add_ref(&mono);
        }
        out.coefficients.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn to_polynomial(&self) -> LaurentPolynomial {
        let al = t_alphabet(self.n);
        let mut out = LaurentPolynomial::zero(&al);
        for (tuple, c) in &self.coefficients {
            let c = c.with_alphabet(&al).expect("suv coefficients");
            for (e, x) in c.terms() {
                let mut e = e.clone();
                for (i, a) in tuple.iter().enumerate() {
                    e[3 + i] = *a as i32 + 1;
                }
                out.add_term(e, x.clone());
            }
        }
        out
    }

    /// Lowers the order.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let mut out = NPointSeries::new(self.genus, self.n, order);
        for (k, v) in &self.coefficients {
            if k.iter().map(|a| a + 1).sum::<u32>() <= order {
                out.coefficients.insert(k.clone(), v.clone());
            }
        }
        out
    }

    /// Every ordered tuple with `Σ(a_i + 1) <= order`, in lexicographic order.
    pub fn tuples(n: usize, order: u32) -> Vec<Vec<u32>> {
        fn rec(n: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let left = (n - cur.len() - 1) as u32 * 2;
            let mut a = 1;
            while a + 1 + left <= budget {
                cur.push(a);
                rec(n, budget - a - 1, cur, out);
                cur.pop();
                a += 1;
            }
        }
        let mut out = Vec::new();
        rec(n, order, &mut Vec::new(), &mut out);
        out
    }

    /// Compares through the smaller order; returns the count of compared tuples
    /// and the first differing tuple, if any.
    pub fn compare(&self, other: &Self) -> (usize, Option<Discrepancy>) {
        if self.n != other.n {
            return (
                0,
                Some(Discrepancy {
                    location: "n".into(),
                    expected: self.n.to_string(),
                    actual: other.n.to_string(),
                }),
            );
        }
        let order = self.order.min(other.order);
        let tuples = Self::tuples(self.n, order);
        for (i, t) in tuples.iter().enumerate() {
            let a = self.coefficient(t);
            let b = other.coefficient(t);
            if a != b {
                return (
                    i + 1,
                    Some(Discrepancy {
                        location: format!("{t:?}"),
                        expected: a.to_text(),
                        actual: b.to_text(),
                    }),
                );
            }
        }
        (tuples.len(), None)
    }

    /// `{"genus","n","order","coefficients":[{"parts":[..],"poly":{..}}]}` in tuple order.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coefficients
            .iter()
            .map(|(k, v)| json!({ "parts": k, "poly": v }))
            .collect();
        json!({ "genus": self.genus, "n": self.n, "order": self.order, "coefficients": coeffs })
    }

    /// True when every slot permutation maps the series to itself.
    pub fn is_symmetric(&self) -> bool {
        self.coefficients.iter().all(|(k, v)| {
            let mut sorted = k.clone();
            sorted.sort_unstable();
            self.coefficients.get(&sorted) == Some(v)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn tuple_enumeration() {
        assert_eq!(NPointSeries::tuples(1, 4), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(NPointSeries::tuples(2, 5), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert!(NPointSeries::tuples(3, 5).is_empty());
    }

    #[test]
    fn polynomial_round_trip() {
        let al = t_alphabet(2);
        let p = LaurentPolynomial::monomial(&al, &[2, 1, 1, 2, 3], int(3))
            + LaurentPolynomial::monomial(&al, &[2, 1, 1, 3, 2], int(3));
        let g = NPointSeries::from_polynomial(0, 2, 6, &p).unwrap();
        assert_eq!(g.coefficients.len(), 2);
        assert!(g.is_symmetric());
        assert_eq!(g.to_polynomial(), p);
        let bad = LaurentPolynomial::monomial(&al, &[0, 0, 0, 1, 2], int(1));
        assert!(NPointSeries::from_polynomial(0, 2, 6, &bad).is_err());
    }
}
