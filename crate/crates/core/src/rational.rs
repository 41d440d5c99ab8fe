//! Arbitrary-precision rational numbers and the three primitive part
//! functions on them.
//!
//! [`Rational`] is the universal scalar of this crate. Values are always
//! stored reduced with a positive denominator, so structural equality is
//! value equality and the total order agrees with ℚ. The part functions
//! round exactly: [`Rational::floor`] toward −∞, [`Rational::ceil`] toward
//! +∞, and [`Rational::frac`] returns `x − ⌊x⌋ ∈ [0, 1)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors from exact scalar arithmetic and construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero is not a valid scale parameter")]
    ZeroScale,
}

/// An exact rational number, stored reduced with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`, reducing to lowest terms.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ExactError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// The unique integer `m` with `m ≤ x < m + 1`, as a rational.
    ///
    /// Exact Euclidean division with sign correction; never goes through
    /// floating point.
    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    /// The unique integer `m` with `m − 1 < x ≤ m`, as a rational.
    pub fn ceil(&self) -> Self {
        Rational(self.0.ceil())
    }

    /// `x − ⌊x⌋`, always in `[0, 1)`.
    pub fn frac(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Integer value of an integral rational, when it fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Rational {
    /// Canonical form: `p/q`, or a bare integer when the denominator is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parse error for rational literals; positions are reported by the DSL
/// cursor in [`crate::parse`], this impl only classifies the token itself.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational literal `{0}`")]
pub struct RationalParseError(pub String);

impl FromStr for Rational {
    type Err = RationalParseError;

    /// Accepts an optional sign, a decimal integer, and an optional
    /// `/` followed by a positive decimal integer: `-3/4`, `7`, `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalParseError(s.to_string());
        let (numer_str, denom_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let numer: BigInt = numer_str.parse().map_err(|_| bad())?;
        if numer_str.starts_with("++") || numer_str.starts_with("--") {
            return Err(bad());
        }
        match denom_str {
            None => Ok(Rational::from_integer(numer)),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let denom: BigInt = d.parse().map_err(|_| bad())?;
                Rational::new(numer, denom).map_err(|_| bad())
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;

    /// Panics on a zero divisor; use [`Rational::checked_div`] where the
    /// divisor is not already known to be nonzero.
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
    }
}

impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// A rational known to be nonzero; scale parameters live behind this type so
/// evaluation never has to re-check for zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonZeroRational(Rational);

impl NonZeroRational {
    pub fn new(value: Rational) -> Result<Self, ExactError> {
        if value.is_zero() {
            return Err(ExactError::ZeroScale);
        }
        Ok(NonZeroRational(value))
    }

    pub fn get(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl fmt::Display for NonZeroRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<Rational> for NonZeroRational {
    type Error = ExactError;
    fn try_from(value: Rational) -> Result<Self, Self::Error> {
        NonZeroRational::new(value)
    }
}

impl PartialEq<Rational> for NonZeroRational {
    fn eq(&self, other: &Rational) -> bool {
        &self.0 == other
    }
}

impl PartialOrd<Rational> for NonZeroRational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

/// Shorthand used throughout the tests: `rat(1, 2)` is 1/2.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom).expect("nonzero denominator")
}

/// Shorthand for integer rationals.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}
