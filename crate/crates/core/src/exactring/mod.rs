//! Exact rational scalars and multivariate polynomials over a fixed
//! variable alphabet.
//!
//! Everything downstream (lattice pairings, period-domain identities, the
//! root-exclusion eliminations) computes in this ring. Coefficients are
//! arbitrary-precision rationals; there is no floating point on any path.

mod monomial;
mod poly;
mod resultant;
mod var;

pub use monomial::Monomial;
pub use num_rational::BigRational;
pub use poly::MultiPoly;
pub use resultant::resultant;
pub use var::{VarError, VarName};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational `{0}`: expected `p` or `p/q`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses a rational from its `p/q` form (`q` omitted means an integer).
/// This is the only way numbers cross the tool boundary; floats never do.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(text.to_owned());
    let (num_str, den_str) = match trimmed.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (trimmed, None),
    };
    let numer: BigInt = num_str.parse().map_err(|_| malformed())?;
    let denom: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| malformed())?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_owned()));
    }
    Ok(BigRational::new(numer, denom))
}

/// `p/q` with the denominator omitted when it is 1.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

pub fn rational_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
