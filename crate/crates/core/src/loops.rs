//! Polynomial loops `exp f` with `f = Σ aₙzⁿ` or `f̃ = Σ bₘz⁻ᵐ`, their
//! Toeplitz blocks on `H₊ = span{z⁰, z¹, …}`, and the pairing
//! `Det(ã·a·ã⁻¹·a⁻¹) = exp(Σ n·aₙ·bₙ)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::parse::parse_rational_function;
use crate::arith::{int, to_f64, Matrix, Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::residue::{residue_classical, Place};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Holomorphic inside the disc: `Σ_{n≥1} aₙzⁿ`.
    Plus,
    /// Holomorphic outside, vanishing at infinity: `Σ_{m≥1} bₘz⁻ᵐ`.
    Minus,
}

/// Exponent of a loop `exp f`. `coeffs[n]` multiplies `zⁿ` (plus) or
/// `z⁻ⁿ` (minus); keys are at least 1 and values nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopExponent {
    side: Side,
    coeffs: BTreeMap<u32, Rational>,
}

impl LoopExponent {
    pub fn new(side: Side, coeffs: impl IntoIterator<Item = (u32, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            if n == 0 {
                return Err(Error::Precondition("loop exponents have no constant term".into()));
            }
            if !c.is_zero() {
                let e: &mut Rational = map.entry(n).or_insert_with(Rational::zero);
                *e += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(LoopExponent { side, coeffs: map })
    }

    pub fn zero(side: Side) -> Self {
        LoopExponent { side, coeffs: BTreeMap::new() }
    }

    /// Parses a Laurent polynomial in `z`: positive powers only for
    /// `Plus`, negative powers only for `Minus`.
    pub fn parse(s: &str, side: Side) -> Result<Self> {
        let r = parse_rational_function(s, "z")?;
        let r = match side {
            Side::Plus => r,
            Side::Minus => r.invert_variable(),
        };
        let which = match side {
            Side::Plus => "positive",
            Side::Minus => "negative",
        };
        if !r.is_polynomial() || !r.numerator().coeff(0).is_zero() {
            return Err(Error::Parse(format!("{s:?} must be a sum of {which} powers of z")));
        }
        let coeffs = r.numerator().coeffs().iter().enumerate().skip(1).map(|(n, c)| (n as u32, c.clone()));
        Self::new(side, coeffs)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, n: u32) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|degree|` in the support, 0 for the zero exponent.
    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        LoopExponent { side: self.side, coeffs: self.coeffs.iter().map(|(n, c)| (*n, -c)).collect() }
    }

    /// Exponent of the product of two loops on the same side.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.side != other.side {
            return Err(Error::Precondition("cannot add exponents from opposite sides".into()));
        }
        Self::new(self.side, self.coeffs.iter().chain(&other.coeffs).map(|(n, c)| (*n, c.clone())))
    }

    /// As a rational function of `t = z`.
    pub fn to_rational_function(&self) -> RationalFunction {
        let p = Polynomial::new(
            (0..=self.max_degree()).map(|n| if n == 0 { Rational::zero() } else { self.coeff(n) }).collect(),
        );
        let r = RationalFunction::from_poly(p);
        match self.side {
            Side::Plus => r,
            Side::Minus => r.invert_variable(),
        }
    }

    /// Coefficients `c₀..c_{n−1}` of `exp(Σ aₖ xᵏ)` in the variable `x = z`
    /// (plus) or `x = z⁻¹` (minus), from `k·c_k = Σ j·a_j·c_{k−j}`.
    fn exp_coeffs(&self, n: usize) -> Vec<Rational> {
        let mut c: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                c.push(Rational::one());
                continue;
            }
            let mut acc = Rational::zero();
            for (&j, a) in &self.coeffs {
                let j = j as usize;
                if j <= k {
                    acc += int(j as i64) * a * &c[k - j];
                }
            }
            c.push(acc / int(k as i64));
        }
        c
    }
}

impl fmt::Display for LoopExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational_function();
        match self.side {
            Side::Plus => write!(f, "{}", r.numerator().display_with("z")),
            Side::Minus => {
                if self.coeffs.is_empty() {
                    return f.write_str("0");
                }
                for (k, (n, c)) in self.coeffs.iter().enumerate() {
                    let neg = c < &Rational::zero();
                    match (k, neg) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    let a = c.abs();
                    if !a.is_one() {
                        write!(f, "{}*", crate::arith::format_rational(&a))?;
                    }
                    write!(f, "z^-{n}")?;
                }
                Ok(())
            }
        }
    }
}

/// `H₊ → H₊` block of multiplication by a loop, on `z⁰..z^{T−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzBlock {
    pub size: usize,
    pub matrix: Matrix<Rational>,
}

/// Block of `exp e` truncated to size `t`: lower unipotent for `Plus`,
/// upper unipotent for `Minus`.
pub fn toeplitz_block(e: &LoopExponent, t: usize) -> Result<ToeplitzBlock> {
    if t == 0 {
        return Err(Error::Precondition("truncation size must be at least 1".into()));
    }
    Ok(ToeplitzBlock { size: t, matrix: toeplitz(e, t, t) })
}

/// `rows × cols` corner of the Toeplitz operator of `exp e`.
fn toeplitz(e: &LoopExponent, rows: usize, cols: usize) -> Matrix<Rational> {
    let c = e.exp_coeffs(rows.max(cols));
    Matrix::from_fn(rows, cols, |i, j| match e.side {
        Side::Plus if i >= j => c[i - j].clone(),
        Side::Minus if j >= i => c[j - i].clone(),
        _ => Rational::zero(),
    })
}

fn check_sides(f: &LoopExponent, ft: &LoopExponent) -> Result<()> {
    if f.side != Side::Plus || ft.side != Side::Minus {
        return Err(Error::Precondition("expected a plus exponent and a minus exponent".into()));
    }
    Ok(())
}

/// Integer Toeplitz corner `rows × cols` of `exp e`, scaled by the returned
/// common denominator.
fn int_toeplitz(e: &LoopExponent, rows: usize, cols: usize) -> (Vec<Vec<BigInt>>, BigInt) {
    let c = e.exp_coeffs(rows.max(cols));
    let den = c.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = c.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let m = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| match e.side {
                    Side::Plus if i >= j => ints[i - j].clone(),
                    Side::Minus if j >= i => ints[j - i].clone(),
                    _ => BigInt::zero(),
                })
                .collect()
        })
        .collect();
    (m, den)
}

fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'bases: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn residue(a: &BigInt, p: u64) -> u64 {
    let r = (a.magnitude() % p).to_u64().expect("remainder fits");
    if a.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(piv, k);
            det = p - det;
        }
        det = mul_mod(det, a[k][k], p);
        let inv = pow_mod(a[k][k], p - 2, p);
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let factor = mul_mod(a[i][k], inv, p);
            for j in k + 1..n {
                let sub = mul_mod(factor, a[k][j], p);
                a[i][j] = if a[i][j] >= sub { a[i][j] - sub } else { a[i][j] + p - sub };
            }
        }
    }
    det % p
}

/// Exact determinant from residues modulo 62-bit primes, combined until
/// the modulus exceeds twice the Hadamard bound.
fn int_det(a: Vec<Vec<BigInt>>) -> BigInt {
    let bound_bits: u64 = a
        .iter()
        .map(|row| {
            let sq: BigInt = row.iter().map(|x| x * x).sum();
            sq.bits().div_ceil(2)
        })
        .sum::<u64>()
        + 2;
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    let mut p = (1u64 << 62) - 1;
    while modulus.bits() <= bound_bits {
        p -= 2;
        if !is_prime(p) {
            continue;
        }
        let reduced = a.iter().map(|row| row.iter().map(|v| residue(v, p)).collect()).collect();
        let r = det_mod(reduced, p);
        // Garner step: x ← x + M·((r − x)·M⁻¹ mod p)
        let m_inv = pow_mod(residue(&modulus, p), p - 2, p);
        let diff = (r + p - residue(&x, p)) % p;
        x += &modulus * BigInt::from(mul_mod(diff, m_inv, p));
        modulus *= p;
    }
    if &x + &x > modulus {
        x - modulus
    } else {
        x
    }
}

/// `det` of the leading `T × T` block of `ã·a·ã⁻¹·a⁻¹`, each factor taken
/// on `z⁰..z^{2T−1}`.
///
/// The inverses are the blocks of `exp(−f)` and `exp(−f̃)`. Only the first
/// `T` columns of the product are formed, right to left, over the integers
/// after clearing denominators.
pub fn sw_pairing_truncated(f: &LoopExponent, ft: &LoopExponent, t: usize) -> Result<Rational> {
    check_sides(f, ft)?;
    let bound = (f.max_degree() + ft.max_degree()) as usize;
    if t <= bound {
        return Err(Error::TruncationTooSmall(format!("T = {t} must exceed {bound}")));
    }
    let n = 2 * t;
    let (x, d1) = int_toeplitz(&f.neg(), n, t);
    let (m2, d2) = int_toeplitz(&ft.neg(), n, n);
    let (m3, d3) = int_toeplitz(f, n, n);
    let (m4, d4) = int_toeplitz(ft, t, n);
    let w = int_mul(&m4, &int_mul(&m3, &int_mul(&m2, &x)));
    let scale = (d1 * d2 * d3 * d4).pow(t as u32);
    Ok(Rational::new(int_det(w), scale))
}

/// `r = Σ n·aₙ·bₙ`, with the pairing equal to `exp(r)`.
pub fn sw_pairing_closed(f: &LoopExponent, ft: &LoopExponent) -> Result<Rational> {
    check_sides(f, ft)?;
    Ok(f.coeffs.iter().fold(Rational::zero(), |acc, (n, a)| acc + int(*n as i64) * a * ft.coeff(*n)))
}

/// `|sw_pairing_truncated(T) − exp(r)|` in double precision.
pub fn sw_truncation_error(f: &LoopExponent, ft: &LoopExponent, t: usize) -> Result<f64> {
    let v = sw_pairing_truncated(f, ft, t)?;
    let r = sw_pairing_closed(f, ft)?;
    Ok((to_f64(&v) - to_f64(&r).exp()).abs())
}

/// The closed exponent agrees with `res_{t=0}(f̃ df)`.
pub fn sw_vs_tate_check(f: &LoopExponent, ft: &LoopExponent) -> Result<bool> {
    let r = sw_pairing_closed(f, ft)?;
    let res = residue_classical(&ft.to_rational_function(), &f.to_rational_function(), &Place::origin())?;
    Ok(r == res)
}

/// `Det(a₁·a₂·a₃⁻¹) = 1` for two plus loops and `a₃` the block of their
/// product, at truncation `T`.
pub fn sw_group_cocycle_check(g1: &LoopExponent, g2: &LoopExponent, t: usize) -> Result<bool> {
    if g1.side != Side::Plus || g2.side != Side::Plus {
        return Err(Error::Precondition("the group cocycle check takes two plus loops".into()));
    }
    let g3 = g1.add(g2)?;
    let a1 = toeplitz(g1, t, t);
    let a2 = toeplitz(g2, t, t);
    let a3_inv = toeplitz(&g3.neg(), t, t);
    Ok(a1.mul(&a2).mul(&a3_inv).det().is_one())
}
