//! Connected dessin correlators from the Virasoro constraints.
//!
//! The primitive is the bare derivative `D_g(A)` of the genus-g free energy at
//! zero coupling. Eliminating one part `m+1` of `A` (the rest is `A'`):
//!
//! ```text
//! (m+1)/s D_g(m+1, A') = Σ_j (a_j+m) D_g(a_j+m, A'∖a_j) + (u+v) m D_g(m, A')
//!     + Σ_{k=1}^{m-1} k(m-k) D_{g-1}(k, m-k, A')
//!     + Σ_{k=1}^{m-1} Σ_{g1+g2=g, I1⊔I2=A'} k(m-k) D_{g1}(k, I1) D_{g2}(m-k, I2)
//! ```
//!
//! with the single source `D_0(1) = s u v`. The total index sum drops by one per
//! step, so the recursion terminates whichever part is eliminated.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use num::One;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{factorial, int, AlgebraError, Alphabet, LaurentPolynomial, Rational, TruncatedSeries};
use crate::closed_forms;
use crate::npoint::{suv_alphabet, t_alphabet, t_slots, NPointSeries};

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum VirasoroError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt cache: {0}")]
    Corrupt(String),
    #[error("cache version {found} is not supported (expected {expected})")]
    Version { found: u64, expected: u32 },
    #[error("order {order} is too small for a {points}-point function (need at least {need})")]
    OrderTooSmall { order: u32, points: usize, need: u32 },
    #[error("operator form needs 2g-2+n > 0 for the assembled function, got g={g}, n={n}")]
    Unstable { g: u32, n: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Genus plus a sorted multiset of positive indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartitionKey {
    pub genus: u32,
    pub parts: Vec<u32>,
}

impl PartitionKey {
    pub fn new(genus: u32, parts: &[u32]) -> Self {
        let mut parts = parts.to_vec();
        parts.sort_unstable();
        PartitionKey { genus, parts }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

/// Memo table of bare correlators over the alphabet `[s, u, v]`.
#[derive(Clone, Debug, Default)]
pub struct CorrelatorTable {
    entries: BTreeMap<PartitionKey, LaurentPolynomial>,
    stats: CacheStats,
}

impl PartialEq for CorrelatorTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    g: u32,
    parts: Vec<u32>,
    poly: LaurentPolynomial,
}

impl CorrelatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &PartitionKey) -> Option<&LaurentPolynomial> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: PartitionKey, value: LaurentPolynomial) {
        self.entries.insert(key, value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PartitionKey, &LaurentPolynomial)> {
        self.entries.iter()
    }

    pub fn stats(&self) -> &CacheStats {
        &self.stats
    }

    /// Keys sorted by `(g, parts)`, so the file is byte-stable.
    pub fn to_json_string(&self) -> String {
        let entries: Vec<CacheEntry> = self
            .entries
            .iter()
            .map(|(k, v)| CacheEntry { g: k.genus, parts: k.parts.clone(), poly: v.clone() })
            .collect();
        json!({ "version": CACHE_VERSION, "alphabet": ["s", "u", "v"], "entries": entries }).to_string()
    }

    pub fn from_json_str(text: &str) -> Result<Self, VirasoroError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| VirasoroError::Corrupt(e.to_string()))?;
        let version = value
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| VirasoroError::Corrupt("missing version".into()))?;
        if version != CACHE_VERSION as u64 {
            return Err(VirasoroError::Version { found: version, expected: CACHE_VERSION });
        }
        if value.get("alphabet") != Some(&json!(["s", "u", "v"])) {
            return Err(VirasoroError::Corrupt("alphabet must be [s, u, v]".into()));
        }
        let entries: Vec<CacheEntry> = serde_json::from_value(
            value.get("entries").cloned().ok_or_else(|| VirasoroError::Corrupt("missing entries".into()))?,
        )
        .map_err(|e| VirasoroError::Corrupt(e.to_string()))?;
        let suv = suv_alphabet();
        let mut table = CorrelatorTable::new();
        for e in entries {
            if e.parts.is_empty() || e.parts.contains(&0) {
                return Err(VirasoroError::Corrupt(format!("bad parts {:?}", e.parts)));
            }
            let key = PartitionKey::new(e.g, &e.parts);
            if key.parts != e.parts {
                return Err(VirasoroError::Corrupt(format!("parts {:?} not sorted", e.parts)));
            }
            let poly = e.poly.with_alphabet(&suv).map_err(|e| VirasoroError::Corrupt(e.to_string()))?;
            if table.entries.insert(key, poly).is_some() {
                return Err(VirasoroError::Corrupt(format!("duplicate entry g={} {:?}", e.g, e.parts)));
            }
        }
        Ok(table)
    }

    /// Writes through a temporary file so a crash never leaves a partial cache.
    pub fn save(&self, path: &Path) -> Result<(), VirasoroError> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_json_string())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, VirasoroError> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    /// Adds every entry of `other` not already present.
    pub fn merge(&mut self, other: &CorrelatorTable) {
        for (k, v) in &other.entries {
            self.entries.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
}

/// Which part the recursion eliminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Largest,
    Smallest,
}

pub struct VirasoroEngine {
    table: CorrelatorTable,
    strategy: Strategy,
    s: LaurentPolynomial,
    u_plus_v: LaurentPolynomial,
    suv: LaurentPolynomial,
}

impl Default for VirasoroEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl VirasoroEngine {
    pub fn new() -> Self {
        Self::with_table(CorrelatorTable::new(), Strategy::Largest)
    }

    pub fn with_strategy(strategy: Strategy) -> Self {
        Self::with_table(CorrelatorTable::new(), strategy)
    }

    pub fn with_table(table: CorrelatorTable, strategy: Strategy) -> Self {
        let al = suv_alphabet();
        let s = LaurentPolynomial::var(&al, "s");
        let u = LaurentPolynomial::var(&al, "u");
        let v = LaurentPolynomial::var(&al, "v");
        VirasoroEngine { suv: &(&s * &u) * &v, u_plus_v: &u + &v, s, table, strategy }
    }

    pub fn table(&self) -> &CorrelatorTable {
        &self.table
    }

    pub fn into_table(self) -> CorrelatorTable {
        self.table
    }

    /// Bare correlator `D_g(A)`.
    pub fn raw(&mut self, genus: u32, parts: &[u32]) -> LaurentPolynomial {
        assert!(!parts.is_empty() && !parts.contains(&0), "parts must be nonempty and positive");
        self.raw_key(PartitionKey::new(genus, parts))
    }

    fn raw_key(&mut self, key: PartitionKey) -> LaurentPolynomial {
        if let Some(v) = self.table.entries.get(&key) {
            self.table.stats.hits += 1;
            return v.clone();
        }
        self.table.stats.misses += 1;
        let value = self.compute(&key);
        self.table.entries.insert(key, value.clone());
        value
    }

    fn get(&mut self, genus: i64, parts: Vec<u32>) -> LaurentPolynomial {
        if genus < 0 || parts.contains(&0) {
            return LaurentPolynomial::zero(&suv_alphabet());
        }
        self.raw_key(PartitionKey::new(genus as u32, &parts))
    }

    fn compute(&mut self, key: &PartitionKey) -> LaurentPolynomial {
        let g = key.genus as i64;
        let pick = match self.strategy {
            Strategy::Largest => key.parts.len() - 1,
            Strategy::Smallest => 0,
        };
        let m = key.parts[pick] - 1;
        let mut rest = key.parts.clone();
        rest.remove(pick);
        let al = suv_alphabet();

        if m == 0 {
            // D_g(1, A') = s (ΣA') D_g(A'), sourced by D_0(1) = suv
            if rest.is_empty() {
                return if g == 0 { self.suv.clone() } else { LaurentPolynomial::zero(&al) };
            }
            let total: u32 = rest.iter().sum();
            return self.get(g, rest).mul_ref(&self.s).scale(&int(total as i64));
        }

        let mut acc = LaurentPolynomial::zero(&al);
        for j in 0..rest.len() {
            let mut next = rest.clone();
            next[j] += m;
            let w = next[j] as i64;
            acc = acc.add_ref(&self.get(g, next).scale(&int(w)));
        }
        let mut with_m = rest.clone();
        with_m.push(m);
        let term = self.get(g, with_m).mul_ref(&self.u_plus_v).scale(&int(m as i64));
        acc = acc.add_ref(&term);

        for k in 1..m {
            let w = int((k * (m - k)) as i64);
            if g >= 1 {
                let mut parts = rest.clone();
                parts.push(k);
                parts.push(m - k);
                acc = acc.add_ref(&self.get(g - 1, parts).scale(&w));
            }
            let n = rest.len();
            for g1 in 0..=g {
                for mask in 0u32..(1 << n) {
                    let mut i1 = vec![k];
                    let mut i2 = vec![m - k];
                    for (idx, &a) in rest.iter().enumerate() {
                        if mask & (1 << idx) != 0 {
                            i1.push(a);
                        } else {
                            i2.push(a);
                        }
                    }
                    let left = self.get(g1, i1);
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.get(g - g1, i2);
                    if right.is_zero() {
                        continue;
                    }
                    acc = acc.add_ref(&left.mul_ref(&right).scale(&w));
                }
            }
        }
        acc.mul_ref(&self.s).scale(&Rational::new(1.into(), (m as i64 + 1).into()))
    }

    /// `(∏ a) D_g(A)`: the coefficient of `∏ x_i^{-a_i-1}` in `G_{g,n}`.
    pub fn weighted(&mut self, genus: u32, parts: &[u32]) -> LaurentPolynomial {
        let w: i64 = parts.iter().map(|&a| a as i64).product();
        self.raw(genus, parts).scale(&int(w))
    }

    /// All weighted correlators with `Σ(a_i + 1) <= order`.
    pub fn npoint_series(&mut self, genus: u32, n: usize, order: u32) -> Result<NPointSeries, VirasoroError> {
        if n == 0 || order < 2 * n as u32 {
            return Err(VirasoroError::OrderTooSmall { order, points: n, need: 2 * n as u32 });
        }
        let mut out = NPointSeries::new(genus, n, order);
        let mut seen: HashMap<Vec<u32>, LaurentPolynomial> = HashMap::new();
        for tuple in NPointSeries::tuples(n, order) {
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            let value = match seen.get(&sorted) {
                Some(v) => v.clone(),
                None => {
                    let v = self.weighted(genus, &sorted);
                    seen.insert(sorted, v.clone());
                    v
                }
            };
            out.insert(tuple, value);
        }
        Ok(out)
    }

    /// `Σ_g n D_g(n)` over `0 <= g <= (n-1)/2`.
    pub fn one_point_all_genus(&mut self, n: u32) -> LaurentPolynomial {
        assert!(n >= 1);
        let mut acc = LaurentPolynomial::zero(&suv_alphabet());
        for g in 0..=(n - 1) / 2 {
            acc = acc.add_ref(&self.weighted(g, &[n]));
        }
        acc
    }
}

/// Direct evaluation of the all-genus one-point sum
/// `(s^n uv / n) Σ_{i+j=n-1} (-1)^j/(i! j!) ∏_{a<=i} (u+a)(v+a) ∏_{b<=j} (u-b)(v-b)`.
pub fn kp_one_point(n: u32) -> LaurentPolynomial {
    assert!(n >= 1);
    let al = suv_alphabet();
    let u = LaurentPolynomial::var(&al, "u");
    let v = LaurentPolynomial::var(&al, "v");
    let shifted = |c: i64| {
        let k = LaurentPolynomial::constant(&al, int(c));
        (&u + &k) * (&v + &k)
    };
    let mut sum = LaurentPolynomial::zero(&al);
    for i in 0..n {
        let j = n - 1 - i;
        let mut term = LaurentPolynomial::one(&al);
        for a in 1..=i {
            term = term * shifted(a as i64);
        }
        for b in 1..=j {
            term = term * shifted(-(b as i64));
        }
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        let denom = Rational::from_integer(factorial(i as u64) * factorial(j as u64));
        sum = sum + term.scale(&(sign / denom));
    }
    let pre = LaurentPolynomial::monomial(&al, &[n as i32, 1, 1], Rational::new(1.into(), (n as i64).into()));
    pre * sum
}

/// Builds `G_{g,n+1}` from the renormalized operator form
///
/// ```text
/// G_{g,n+1}(x0, X) (1 - s(u+v)/x0 - 2s G_{0,1}(x0))
///     = s [ Σ_j D_{x0,xj} G_{g,n}(X) + E G_{g-1,n+2}(x0, x0, X) + Σ' E G G ]
/// ```
///
/// where the primed sum skips `G_{0,1}` factors and `G_{0,1}`, `G_{0,2}` come
/// from their closed forms. Lower functions are produced by the same route.
pub fn assemble_operator_form(genus: u32, n: usize, order: u32) -> Result<NPointSeries, VirasoroError> {
    let points = n + 1;
    if 2 * genus as i64 - 2 + points as i64 <= 0 {
        return Err(VirasoroError::Unstable { g: genus, n: points });
    }
    let need = 2 * points as u32;
    if order < need {
        return Err(VirasoroError::OrderTooSmall { order, points, need });
    }
    let mut asm = OperatorForm::new(order)?;
    let poly = asm.function(genus, points)?;
    Ok(NPointSeries::from_polynomial(genus, points, order, &poly)?)
}

struct OperatorForm {
    order: i32,
    memo: HashMap<(u32, usize), LaurentPolynomial>,
    /// `1/(1 - s(u+v)t - 2s G_{0,1}(t))` over `[s, u, v, t1]`.
    inverse_denominator: LaurentPolynomial,
}

impl OperatorForm {
    fn new(order: u32) -> Result<Self, AlgebraError> {
        let order = order as i32;
        let al1 = t_alphabet(1);
        let g01 = closed_forms::g01_polynomial(order as u32)?;
        let s = LaurentPolynomial::var(&al1, "s");
        let upv = &LaurentPolynomial::var(&al1, "u") + &LaurentPolynomial::var(&al1, "v");
        let t = LaurentPolynomial::var(&al1, "t1");
        let den = LaurentPolynomial::one(&al1) - &(&(&s * &upv) * &t) - &(&s * &g01).scale(&int(2));
        let inverse = TruncatedSeries::from_polynomial("t1", &den, order)?.invert()?.to_polynomial(&al1)?;
        let mut memo = HashMap::new();
        memo.insert((0, 1), g01);
        memo.insert((0, 2), closed_forms::g02_polynomial(order as u32)?);
        Ok(OperatorForm { order, memo, inverse_denominator: inverse })
    }

    /// `G_{g,k}` over `[s, u, v, t1..tk]`, total t-degree `<= order`.
    fn function(&mut self, genus: u32, k: usize) -> Result<LaurentPolynomial, AlgebraError> {
        if let Some(p) = self.memo.get(&(genus, k)) {
            return Ok(p.clone());
        }
        let n = k - 1;
        let target = t_alphabet(k);
        let slots = t_slots(k);
        let mut bracket = LaurentPolynomial::zero(&target);

        if n >= 1 {
            let lower = self.function(genus, n)?;
            for j in 1..=n {
                bracket = bracket.add_ref(&Self::apply_d(&lower, &target, n, j));
            }
        }
        if genus >= 1 {
            // E: both extra slots land on t1
            let lower = self.function(genus - 1, n + 2)?;
            let mut map = vec![0, 1, 2, 3, 3];
            map.extend((1..=n).map(|l| 3 + l));
            bracket = bracket.add_ref(&lower.remap(&target, &map));
        }
        for g1 in 0..=genus {
            let g2 = genus - g1;
            for mask in 0u32..(1 << n) {
                let i1: Vec<usize> = (1..=n).filter(|l| mask & (1 << (l - 1)) != 0).collect();
                let i2: Vec<usize> = (1..=n).filter(|l| mask & (1 << (l - 1)) == 0).collect();
                if (g1 == 0 && i1.is_empty()) || (g2 == 0 && i2.is_empty()) {
                    continue;
                }
                let f1 = self.embedded(g1, &i1, &target)?;
                let f2 = self.embedded(g2, &i2, &target)?;
                bracket = bracket.add_ref(&f1.mul_truncated(&f2, &slots, self.order));
            }
        }
        let s = LaurentPolynomial::var(&target, "s");
        let inv = self.inverse_denominator.remap(&target, &[0, 1, 2, 3]);
        let result = bracket.mul_ref(&s).mul_truncated(&inv, &slots, self.order);
        self.memo.insert((genus, k), result.clone());
        Ok(result)
    }

    /// `G_{g,|I|+1}(x0, x_I)` placed in `target`.
    fn embedded(&mut self, genus: u32, labels: &[usize], target: &Alphabet) -> Result<LaurentPolynomial, AlgebraError> {
        let f = self.function(genus, labels.len() + 1)?;
        let mut map = vec![0, 1, 2, 3];
        map.extend(labels.iter().map(|l| 3 + l));
        Ok(f.remap(target, &map))
    }

    /// `D_{x0,xj}`: `t_j^{b+1} -> Σ_{i<b} (i+1) t0^{b-i+1} t_j^{i+2}`, with t0 the new first slot.
    fn apply_d(lower: &LaurentPolynomial, target: &Alphabet, n: usize, j: usize) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(target);
        for (e, c) in lower.terms() {
            let b = e[2 + j] - 1;
            for i in 0..b {
                let mut ne = smallvec::SmallVec::from_elem(0, target.len());
                ne[..3].copy_from_slice(&e[..3]);
                for l in 1..=n {
                    ne[3 + l] = e[2 + l];
                }
                ne[3] = b - i + 1;
                ne[3 + j] = i + 2;
                out.add_term(ne, c.clone() * int(i as i64 + 1));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn suv(es: [i32; 3], c: Rational) -> LaurentPolynomial {
        LaurentPolynomial::monomial(&suv_alphabet(), &es, c)
    }

    #[test]
    fn base_values() {
        let mut e = VirasoroEngine::new();
        assert_eq!(e.raw(0, &[1]), suv([1, 1, 1], int(1)));
        assert!(e.raw(1, &[1]).is_zero());
        assert_eq!(e.raw(0, &[2]), suv([2, 2, 1], rat(1, 2)) + suv([2, 1, 2], rat(1, 2)));
        assert_eq!(e.raw(1, &[3]), suv([3, 1, 1], rat(1, 3)));
        assert_eq!(e.raw(0, &[1, 1]), suv([2, 1, 1], int(1)));
        assert_eq!(e.weighted(0, &[1, 1, 1]), suv([3, 1, 1], int(2)));
        // D_0(3) = s^3 uv (u^2 + 3uv + v^2)/3
        let d03 = suv([3, 3, 1], rat(1, 3)) + suv([3, 2, 2], int(1)) + suv([3, 1, 3], rat(1, 3));
        assert_eq!(e.raw(0, &[3]), d03);
    }

    #[test]
    fn weighted_four_is_narayana_row() {
        let mut e = VirasoroEngine::new();
        let expect = suv([4, 4, 1], int(1)) + suv([4, 3, 2], int(6)) + suv([4, 2, 3], int(6)) + suv([4, 1, 4], int(1));
        assert_eq!(e.weighted(0, &[4]), expect);
    }

    #[test]
    fn memo_hits_are_counted() {
        let mut e = VirasoroEngine::new();
        e.raw(0, &[3, 2]);
        let misses = e.table().stats().misses;
        e.raw(0, &[2, 3]);
        assert_eq!(e.table().stats().misses, misses);
        assert!(e.table().stats().hits >= 1);
    }

    #[test]
    fn kp_small_values() {
        assert_eq!(kp_one_point(1), suv([1, 1, 1], int(1)));
        assert_eq!(kp_one_point(2), suv([2, 2, 1], int(1)) + suv([2, 1, 2], int(1)));
        let three = suv([3, 3, 1], int(1)) + suv([3, 2, 2], int(3)) + suv([3, 1, 3], int(1)) + suv([3, 1, 1], int(1));
        assert_eq!(kp_one_point(3), three);
        let mut e = VirasoroEngine::new();
        assert_eq!(e.one_point_all_genus(3), three);
    }

    #[test]
    fn npoint_two_point_corner() {
        let mut e = VirasoroEngine::new();
        let g = e.npoint_series(0, 2, 5).unwrap();
        assert_eq!(g.coefficient(&[1, 1]), suv([2, 1, 1], int(1)));
        assert!(g.is_symmetric());
        assert!(e.npoint_series(0, 3, 5).is_err());
    }

    #[test]
    fn operator_form_one_point_genus_one() {
        let g = assemble_operator_form(1, 0, 6).unwrap();
        assert_eq!(g.coefficient(&[3]), suv([3, 1, 1], int(1)));
        assert!(matches!(assemble_operator_form(0, 1, 6), Err(VirasoroError::Unstable { .. })));
        assert!(matches!(assemble_operator_form(0, 2, 5), Err(VirasoroError::OrderTooSmall { .. })));
    }

    #[test]
    fn cache_json_is_sorted_and_versioned() {
        let mut e = VirasoroEngine::new();
        e.raw(0, &[2, 1]);
        let text = e.table().to_json_string();
        assert!(text.starts_with("{\"alphabet\":[\"s\",\"u\",\"v\"],\"entries\":[{\"g\":0,\"parts\":[1]"));
        let back = CorrelatorTable::from_json_str(&text).unwrap();
        assert_eq!(&back, e.table());
        let wrong = text.replace("\"version\":1", "\"version\":7");
        assert!(matches!(CorrelatorTable::from_json_str(&wrong), Err(VirasoroError::Version { found: 7, .. })));
        assert!(CorrelatorTable::from_json_str(&text[..text.len() - 3]).is_err());
    }
}
