//! Coefficient fields: arbitrary-precision rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use super::AlgebraError;

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` as a reduced rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The operations every coefficient field has to provide.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    fn from_rational(r: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Serialized form: `"p/q"` for rationals, `"re+im*i"` for Gaussian rationals.
    fn to_json_string(&self) -> String;

    fn parse_json_string(s: &str) -> Result<Self, AlgebraError>;

    /// Human rendering, denominators of one omitted.
    fn to_text(&self) -> String;

    /// True when the text rendering needs parentheses as a factor.
    fn is_compound(&self) -> bool {
        false
    }

    /// Rational value when the coefficient is real.
    fn as_rational(&self) -> Option<Rational>;
}

fn rational_text(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_json(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl Coefficient for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_json_string(&self) -> String {
        rational_json(self)
    }

    fn parse_json_string(s: &str) -> Result<Self, AlgebraError> {
        parse_rational(s)
    }

    fn to_text(&self) -> String {
        rational_text(self)
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::new(Rational::one(), Rational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        GaussianRational::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Coefficient for GaussianRational {
    fn from_rational(r: &Rational) -> Self {
        GaussianRational::from(r.clone())
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    fn to_json_string(&self) -> String {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{}{}{}*i", rational_json(&self.re), sign, rational_json(&self.im.abs()))
    }

    fn parse_json_string(s: &str) -> Result<Self, AlgebraError> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*i") else {
            return Ok(GaussianRational::from(parse_rational(s)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let re = parse_rational(&body[..i])?;
                let mut im = parse_rational(&body[i + 1..])?;
                if body.as_bytes()[i] == b'-' {
                    im = -im;
                }
                Ok(GaussianRational::new(re, im))
            }
            None => Ok(GaussianRational::new(Rational::zero(), parse_rational(body)?)),
        }
    }

    fn to_text(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => rational_text(&self.re),
            (true, false) => format!("{}*i", rational_text(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                format!("{}{}{}*i", rational_text(&self.re), sign, rational_text(&self.im.abs()))
            }
        }
    }

    fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    fn as_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }
}

/// Binomial coefficient `C(n, k)` for `0 <= k <= n`, zero otherwise.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n!! = n (n-2) (n-4) ...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

/// Generalized binomial `C(1/2, k)` style coefficient `C(p/q, k)` as a rational.
pub fn binomial_rational(top: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (top - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_round_trip() {
        let r = rat(-6, 4);
        assert_eq!(r.to_json_string(), "-3/2");
        assert_eq!(Rational::parse_json_string("-3/2").unwrap(), r);
        assert_eq!(Rational::parse_json_string("7").unwrap(), int(7));
        assert!(Rational::parse_json_string("1/0").is_err());
        assert_eq!(int(5).to_text(), "5");
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * i.clone(), -GaussianRational::one());
        let z = GaussianRational::new(rat(1, 2), rat(-3, 4));
        assert_eq!(z.conj().conj(), z);
        let inv = z.inverse().unwrap();
        assert_eq!(z.clone() * inv, GaussianRational::one());
        let s = z.to_json_string();
        assert_eq!(s, "1/2-3/4*i");
        assert_eq!(GaussianRational::parse_json_string(&s).unwrap(), z);
        assert_eq!(
            GaussianRational::parse_json_string("-1/1+2/1*i").unwrap(),
            GaussianRational::new(int(-1), int(2))
        );
        assert_eq!(GaussianRational::parse_json_string("2*i").unwrap(), GaussianRational::new(int(0), int(2)));
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(double_factorial(7), BigInt::from(105));
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(binomial_rational(&rat(1, 2), 2), rat(-1, 8));
    }
}
