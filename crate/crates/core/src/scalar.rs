//! Coefficient field abstraction.
//!
//! Everything symbolic in this crate is generic over a [`Scalar`]: a field
//! of characteristic zero as far as the algorithms are concerned. The exact
//! instantiation used by the catalog, the parser and the CLI is
//! [`Rational`](crate::Rational). `f64` also satisfies the trait and is handy
//! for quick numerical evaluation of large concrete algebras, but exact
//! decisions (span membership, identity checks) should use rationals.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

/// Scalars with exact equality, usable as hash keys.
pub trait ExactScalar: Scalar + Eq + std::hash::Hash {}

impl<T> ExactScalar for T where T: Scalar + Eq + std::hash::Hash {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct RationalParseError(pub String);

/// Parses `p`, `-p` or `p/q` (q ≠ 0) into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        None => {
            let n: BigInt = text.parse().map_err(|_| err())?;
            Ok(BigRational::from_integer(n))
        }
        Some((p, q)) => {
            let n: BigInt = p.trim().parse().map_err(|_| err())?;
            let d: BigInt = q.trim().parse().map_err(|_| err())?;
            if d == BigInt::from(0) {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Lossy conversion used when moving exact data into a float instantiation.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `n!` in the given scalar type.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::from_usize(k).expect("small factorial"))
}
