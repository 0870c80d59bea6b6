//! Truncated Laurent series in one formal variable.
//!
//! A series carries its own precision: coefficients of degree ≥ `prec` are
//! unknown, not zero. Binary operations never claim more than they know;
//! for operands without polar part the result precision is the minimum of
//! the operand precisions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use super::{format_rational, rat, Field, Polynomial, Rational, Ring};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct TruncatedLaurentSeries<C = Rational> {
    var: String,
    prec: i64,
    coeffs: BTreeMap<i64, C>,
}

impl<C: Ring> TruncatedLaurentSeries<C> {
    pub fn new(var: &str, prec: i64, coeffs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if k < prec && !c.is_zero() {
                let e = map.entry(k).or_insert_with(C::zero);
                *e = std::mem::replace(e, C::zero()) + c;
            }
        }
        map.retain(|_, c: &mut C| !c.is_zero());
        TruncatedLaurentSeries { var: var.to_string(), prec, coeffs: map }
    }

    pub fn zero(var: &str, prec: i64) -> Self {
        Self::new(var, prec, [])
    }

    pub fn one(var: &str, prec: i64) -> Self {
        Self::new(var, prec, [(0, C::one())])
    }

    pub fn monomial(var: &str, c: C, degree: i64, prec: i64) -> Self {
        Self::new(var, prec, [(degree, c)])
    }

    pub fn constant(var: &str, c: C, prec: i64) -> Self {
        Self::monomial(var, c, 0, prec)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Exclusive upper bound of known degrees.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Lowest degree with a nonzero coefficient, or the precision when every
    /// known coefficient vanishes.
    pub fn min_degree(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.prec)
    }

    /// `None` for degrees at or beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<C> {
        (k < self.prec).then(|| self.c(k))
    }

    fn c(&self, k: i64) -> C {
        self.coeffs.get(&k).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// True when every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let p = prec.min(self.prec);
        Self::new(&self.var, p, self.coeffs.iter().filter(|(k, _)| **k < p).map(|(k, c)| (*k, c.clone())))
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch(self.var.clone(), other.var.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let p = self.prec.min(other.prec);
        Ok(Self::new(
            &self.var,
            p,
            self.coeffs.iter().chain(other.coeffs.iter()).map(|(k, c)| (*k, c.clone())),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurentSeries {
            var: self.var.clone(),
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.var, self.prec, self.coeffs.iter().map(|(k, c)| (*k, c.scale(q))))
    }

    pub fn scale_by(&self, s: &C) -> Self {
        Self::new(&self.var, self.prec, self.coeffs.iter().map(|(k, c)| (*k, c.clone() * s.clone())))
    }

    /// Product. The result precision is
    /// `min(prec_a + min(val_b, 0), prec_b + min(val_a, 0))`, which is
    /// `min(prec_a, prec_b)` whenever neither factor has a polar part.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let va = self.min_degree().min(0);
        let vb = other.min_degree().min(0);
        let p = (self.prec + vb).min(other.prec + va);
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k = ka + kb;
                if k >= p {
                    break;
                }
                let e = out.entry(k).or_insert_with(C::zero);
                *e = std::mem::replace(e, C::zero()) + ca.clone() * cb.clone();
            }
        }
        Ok(Self::new(&self.var, p, out))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(&self.var, self.prec);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `Σ aⁿ/n!`; requires no constant or polar part.
    pub fn exp(&self) -> Result<Self> {
        if self.min_degree() < 1 {
            return Err(Error::NotTopologicallyNilpotent(format!(
                "exp needs min_degree >= 1, got {}",
                self.min_degree()
            )));
        }
        let mut acc = Self::one(&self.var, self.prec);
        let mut term = Self::one(&self.var, self.prec);
        let mut n = 1i64;
        while !term.is_zero() {
            term = term.mul(self)?.scale(&rat(1, n));
            acc = acc.add(&term)?;
            n += 1;
        }
        Ok(acc)
    }

    /// `Σ (−1)^{r+1} (a − 1)^r / r`; requires constant term 1 and no polar
    /// part.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.c(0);
        if self.min_degree() < 0 || !c0.is_one() || self.prec <= 0 {
            return Err(Error::LogConstantTerm(format!("{c0:?}")));
        }
        let b = self.sub(&Self::one(&self.var, self.prec))?;
        let mut acc = Self::zero(&self.var, self.prec);
        let mut power = Self::one(&self.var, self.prec);
        let mut r = 1i64;
        loop {
            power = power.mul(&b)?;
            if power.is_zero() {
                break;
            }
            let sign = if r % 2 == 1 { rat(1, r) } else { rat(-1, r) };
            acc = acc.add(&power.scale(&sign))?;
            r += 1;
        }
        Ok(acc)
    }

    /// `a(z^k)` for `k ≥ 1`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k >= 1);
        Self::new(&self.var, self.prec * k, self.coeffs.iter().map(|(d, c)| (d * k, c.clone())))
    }

    /// Coefficients as a polynomial in the variable, for series with no
    /// polar part.
    pub fn to_coeff_vec(&self) -> Vec<C> {
        let hi = self.coeffs.keys().next_back().copied().unwrap_or(-1);
        (0..=hi).map(|k| self.c(k)).collect()
    }
}

impl<C: Field> TruncatedLaurentSeries<C> {
    /// Multiplicative inverse. The leading known coefficient must be
    /// nonzero; relative precision is preserved.
    pub fn inverse(&self) -> Result<Self> {
        let Some((&v, lead)) = self.coeffs.iter().next() else {
            return Err(Error::Precondition("inverse of a series with no known nonzero term".into()));
        };
        let lead_inv = lead.inv().expect("stored coefficients are nonzero");
        let rel = self.prec - v;
        // self = lead z^v (1 + u), u has positive valuation
        let mut coeffs = vec![C::zero(); rel.max(0) as usize];
        if rel > 0 {
            coeffs[0] = lead_inv.clone();
        }
        for n in 1..rel {
            let mut s = C::zero();
            for k in 1..=n {
                let a = self.c(v + k);
                if !a.is_zero() {
                    s = s + a * coeffs[(n - k) as usize].clone();
                }
            }
            coeffs[n as usize] = -(s * lead_inv.clone());
        }
        Ok(Self::new(&self.var, rel - v, coeffs.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c))))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }
}

impl TruncatedLaurentSeries<Rational> {
    pub fn from_polynomial(var: &str, p: &Polynomial, prec: i64) -> Self {
        Self::new(var, prec, p.coeffs().iter().enumerate().map(|(k, c)| (k as i64, c.clone())))
    }

    pub fn to_polynomial(&self) -> Option<Polynomial> {
        (self.min_degree() >= 0).then(|| Polynomial::new(self.to_coeff_vec()))
    }
}

impl fmt::Display for TruncatedLaurentSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = &self.var;
        let mut out = String::new();
        for (&k, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.clone(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&format_rational(&a));
            } else {
                let n = a.numer();
                let d = a.denom();
                if !n.is_one() {
                    out.push_str(&format!("{n}*"));
                }
                out.push_str(&mono);
                if !d.is_one() {
                    out.push_str(&format!("/{d}"));
                }
            }
        }
        let tail = format!("O({var}^{})", self.prec);
        if out.is_empty() {
            f.write_str(&tail)
        } else {
            write!(f, "{out} + {tail}")
        }
    }
}

impl<C: fmt::Debug> fmt::Debug for TruncatedLaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}; prec {}]{{", self.var, self.prec)?;
        for (k, c) in &self.coeffs {
            write!(f, " {k}: {c:?},")?;
        }
        write!(f, " }}")
    }
}

/// `e^q` as a series in `var`: the partial sums of the exponential series
/// of the scalar `q·var^degree`.
pub fn exp_monomial(var: &str, q: &Rational, degree: i64, prec: i64) -> TruncatedLaurentSeries {
    TruncatedLaurentSeries::monomial(var, q.clone(), degree, prec)
        .exp()
        .expect("positive-degree monomial")
}
