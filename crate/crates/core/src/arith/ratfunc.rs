//! Elements of ℚ(t).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// `numerator / denominator` with a monic denominator coprime to the
/// numerator. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Polynomial::gcd(&num, &den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let l = den.lead().recip();
        Ok(RationalFunction { num: num.scale(&l), den: den.scale(&l) })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn t() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(Self {
            num: base.num.pow(e.unsigned_abs()),
            den: base.den.pow(e.unsigned_abs()),
        })
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// `self(t + a)`.
    pub fn shift(&self, a: &Rational) -> Self {
        Self::new(self.num.shift(a), self.den.shift(a)).expect("shift keeps denominator nonzero")
    }

    /// `self(1/w)` as a rational function of `w`.
    pub fn invert_variable(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let d = dn.max(dd);
        Self::new(self.num.reverse(d), self.den.reverse(d)).expect("reversal keeps denominator nonzero")
    }

    /// Order of vanishing at the irreducible polynomial `p`; negative for
    /// poles. Errors on the zero function.
    pub fn valuation(&self, p: &Polynomial) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(self.num.valuation(p) as i64 - self.den.valuation(p) as i64)
    }

    /// Order of vanishing at infinity: `deg den - deg num`.
    pub fn valuation_at_infinity(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn display_with(&self, var: &str) -> String {
        let n = self.num.display_with(var);
        if self.den.is_one() {
            return n;
        }
        let wrap = |s: String, p: &Polynomial| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(self.den.display_with(var), &self.den))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> Self {
        -&self
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}
