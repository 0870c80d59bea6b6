//! Simple extensions ℚ[x]/(p(x)) of the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::{factor, Field, Polynomial, Rational, Ring};
use crate::error::{Error, Result};

/// ℚ[x]/(modulus) for a monic irreducible modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: Polynomial,
}

impl NumberField {
    pub fn new(modulus: Polynomial) -> Result<Arc<Self>> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::Precondition("number field modulus must have positive degree".into()));
        }
        if !modulus.is_monic() {
            return Err(Error::Precondition(format!("modulus {modulus} is not monic")));
        }
        if !factor::is_irreducible(&modulus) {
            return Err(Error::NotIrreducible(modulus.to_string()));
        }
        Ok(Arc::new(NumberField { modulus }))
    }

    /// ℚ(i) = ℚ[x]/(x² + 1).
    pub fn gaussian() -> Arc<Self> {
        Self::new(Polynomial::from_ints(&[1, 0, 1])).unwrap()
    }

    /// ℚ(√2) = ℚ[x]/(x² − 2).
    pub fn sqrt2() -> Arc<Self> {
        Self::new(Polynomial::from_ints(&[-2, 0, 1])).unwrap()
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn element(self: &Arc<Self>, rep: Polynomial) -> NumberFieldElement {
        NumberFieldElement { field: Some(self.clone()), rep: rep.rem(&self.modulus) }
    }

    pub fn generator(self: &Arc<Self>) -> NumberFieldElement {
        self.element(Polynomial::x())
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> NumberFieldElement {
        self.element(Polynomial::constant(q))
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", self.modulus.display_with("x"))
    }
}

/// An element of a [`NumberField`].
///
/// Elements built through [`Zero`]/[`One`] or [`Ring::from_rational`] carry
/// no field; they behave as rationals and adopt the field of whatever they
/// are combined with. Combining elements of two different fields panics.
#[derive(Clone)]
pub struct NumberFieldElement {
    field: Option<Arc<NumberField>>,
    rep: Polynomial,
}

impl NumberFieldElement {
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Representative of degree below the modulus degree.
    pub fn rep(&self) -> &Polynomial {
        &self.rep
    }

    /// The element as a rational, if it lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.rep.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    fn join(a: &Self, b: &Self) -> Option<Arc<NumberField>> {
        match (&a.field, &b.field) {
            (Some(x), Some(y)) => {
                assert!(Arc::ptr_eq(x, y) || x == y, "elements of different number fields: {x:?} vs {y:?}");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn build(field: Option<Arc<NumberField>>, rep: Polynomial) -> Self {
        let rep = match &field {
            Some(k) => rep.rem(&k.modulus),
            None => rep,
        };
        NumberFieldElement { field, rep }
    }

    /// Matrix of multiplication by `self` on the basis 1, x, …, x^{d−1}.
    /// Column `k` holds the coordinates of `self · x^k`.
    pub fn regular_matrix(&self) -> Matrix<Rational> {
        let Some(k) = &self.field else {
            return Matrix::from_rows(vec![vec![self.rep.coeff(0)]]);
        };
        let d = k.degree();
        let mut m = Matrix::zeros(d, d);
        let mut col = self.rep.clone();
        for j in 0..d {
            for i in 0..d {
                m[(i, j)] = col.coeff(i);
            }
            col = (&col * &Polynomial::x()).rem(&k.modulus);
        }
        m
    }

    /// N_{K/ℚ}(self): determinant of the multiplication map.
    pub fn norm(&self) -> Rational {
        self.regular_matrix().det()
    }

    /// Tr_{K/ℚ}(self): trace of the multiplication map.
    pub fn trace(&self) -> Rational {
        self.regular_matrix().trace()
    }
}

/// Field norm N_{K/ℚ}(e). Elements without a field are treated as
/// elements of ℚ itself.
pub fn field_norm(e: &NumberFieldElement) -> Rational {
    e.norm()
}

pub fn field_trace(e: &NumberFieldElement) -> Rational {
    e.trace()
}

impl PartialEq for NumberFieldElement {
    fn eq(&self, other: &Self) -> bool {
        if let (Some(a), Some(b)) = (&self.field, &other.field) {
            if !(Arc::ptr_eq(a, b) || a == b) {
                return false;
            }
        }
        self.rep == other.rep
    }
}

impl fmt::Debug for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rep.display_with("x"))
    }
}

impl Add for NumberFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let k = Self::join(&self, &rhs);
        Self::build(k, &self.rep + &rhs.rep)
    }
}

impl Sub for NumberFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let k = Self::join(&self, &rhs);
        Self::build(k, &self.rep - &rhs.rep)
    }
}

impl Mul for NumberFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let k = Self::join(&self, &rhs);
        Self::build(k, &self.rep * &rhs.rep)
    }
}

impl Neg for NumberFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        NumberFieldElement { field: self.field, rep: -self.rep }
    }
}

impl Zero for NumberFieldElement {
    fn zero() -> Self {
        NumberFieldElement { field: None, rep: Polynomial::zero() }
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl One for NumberFieldElement {
    fn one() -> Self {
        NumberFieldElement { field: None, rep: Polynomial::one() }
    }
}

impl Ring for NumberFieldElement {
    fn from_rational(q: &Rational) -> Self {
        NumberFieldElement { field: None, rep: Polynomial::constant(q.clone()) }
    }

    fn scale(&self, q: &Rational) -> Self {
        NumberFieldElement { field: self.field.clone(), rep: self.rep.scale(q) }
    }
}

impl Field for NumberFieldElement {
    fn inv(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        match &self.field {
            None => Some(Self::from_rational(&self.rep.coeff(0).recip())),
            Some(k) => self.rep.inv_mod(&k.modulus).map(|r| Self::build(Some(k.clone()), r)),
        }
    }
}
