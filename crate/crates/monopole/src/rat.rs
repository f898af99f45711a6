//! Exact rational scalars, parsing/formatting, and the coefficient trait
//! the polynomial and bracket kernels are generic over.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Arbitrary-precision rational scalar, always in canonical reduced form.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for n/d. Panics on d == 0; meant for literals in code and tests.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or "p" with optional sign, arbitrary precision.
pub fn parse_rat(s: &str) -> Result<Rat, RatError> {
    let s = s.trim();
    let mk = |t: &str| t.parse::<BigInt>().map_err(|_| RatError::Parse(s.to_owned()));
    match s.split_once('/') {
        None => Ok(Rat::from_integer(mk(s)?)),
        Some((n, d)) => {
            let numer = mk(n)?;
            let denom = mk(d)?;
            if denom.is_zero() {
                return Err(RatError::ZeroDenominator(s.to_owned()));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

/// Formats as "p/q", or "p" when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Scalar fields the shared kernels run over: exact rationals for all
/// verification paths, complex doubles for the flow integrator only.
pub trait Coeff:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_int(n: i64) -> Self;
}

impl Coeff for Rat {
    fn from_int(n: i64) -> Self {
        rat_int(n)
    }
}

impl Coeff for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// Lossy conversion to f64 for the flow integrator.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
