//! Exact truncated Laurent series over the Novikov field in two variables.
//!
//! `T`-exponents are formal combinations of two area symbols `A` and `B`;
//! a [`ValuationMap`] assigns them numeric weights so that terms can be
//! ordered and truncated.

mod exponent;
mod json;
mod rat;
mod series;

pub use exponent::{q, qi, val, AreaExponent, Monomial, ScaledMonomial, ValuationMap, Q};
pub use json::{SeriesJson, TermJson};
pub use rat::{ParseRatError, Rat};
pub use series::{
    add, eq_up_to_cutoff, invert_unit, mul, one_plus, pow, series, substitute, t_pow, NovikovSeries,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NovikovError {
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("remainder is not topologically nilpotent: the lowest-valuation part has several monomials")]
    NonNilpotentRemainder,
    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),
    #[error("invalid valuation map nu_A={nu_a}, nu_B={nu_b}: need nu_A > nu_B > 0")]
    InvalidValuation { nu_a: Q, nu_b: Q },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("malformed series document: {0}")]
    Json(String),
}

#[cfg(test)]
mod tests;
