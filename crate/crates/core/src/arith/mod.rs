//! Exact scalars, polynomials, rational functions, number fields and
//! truncated Laurent series.
//!
//! Everything here works over ℚ (or a single-generator extension of ℚ) and
//! never rounds. Values are immutable once built; operations return new
//! values.

pub mod factor;
pub mod matrix;
pub mod numfield;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod series;

use std::fmt::Debug;
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use matrix::Matrix;
pub use numfield::{NumberField, NumberFieldElement};
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use series::TruncatedLaurentSeries;

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// A commutative ℚ-algebra with exact equality.
pub trait Ring:
    Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Multiply by a rational scalar.
    fn scale(&self, q: &Rational) -> Self {
        self.clone() * Self::from_rational(q)
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Ring for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Text form `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `n!` as a rational.
pub fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Converts to `f64`, used only where a value is compared against a
/// transcendental constant.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down by the same power of two
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}
