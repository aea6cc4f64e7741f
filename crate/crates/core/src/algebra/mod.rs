//! Exact coefficients, multivariate Laurent polynomials and truncated series.

pub mod coeff;
pub mod poly;
pub mod series;

pub use coeff::{binomial, binomial_rational, double_factorial, factorial, int, rat, Coefficient, GaussianRational, Rational};
pub use poly::{Alphabet, Exponents, LaurentPolynomial};
pub use series::{binomial_series, residue_coefficient, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("polynomial is not invertible (not a monomial)")]
    NotInvertible,
    #[error("not expressible: {0}")]
    NotExpressible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    NonUnitConstant(String),
    #[error("valuation error: {0}")]
    Valuation(String),
    #[error("coefficient at exponent {requested} lies beyond the series order {order}")]
    BeyondOrder { requested: i32, order: i32 },
    #[error("exponent -1 lies outside the window [{min_exp}, {order}]; widen the truncation")]
    ResidueOutOfWindow { min_exp: i32, order: i32 },
    #[error("series variables differ: {0} vs {1}")]
    VariableMismatch(String, String),
}
