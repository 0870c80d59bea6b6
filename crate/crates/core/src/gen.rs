//! Seeded random inputs for self-tests and property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, rat, NumberField, NumberFieldElement, Polynomial, Rational, RationalFunction};
use crate::loops::{LoopExponent, Side};
use crate::operator::{FinitePotentOperator, JordanTail, SparseOperator};
use crate::residue::Place;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer in `[-3, 3]`, or now and then a fraction with denominator ≤ 3.
pub fn small_rational(rng: &mut Rng) -> Rational {
    let n = rng.gen_range(-3..=3);
    if rng.gen_bool(0.2) {
        rat(n, rng.gen_range(1..=3))
    } else {
        int(n)
    }
}

/// Random sparse block on `indices × indices` with roughly the given fill.
fn random_block(rng: &mut Rng, indices: &[i64], fill: f64) -> Vec<(i64, i64, Rational)> {
    let mut out = Vec::new();
    for &i in indices {
        for &j in indices {
            if rng.gen_bool(fill) {
                out.push((i, j, small_rational(rng)));
            }
        }
    }
    out
}

/// A finite potent operator whose invertible core has dimension at most
/// `max_core`.
///
/// The finite part is block upper triangular `[[C, X], [0, N]]` with `C`
/// random of size `≤ max_core` and `N` strictly upper triangular; a Jordan
/// tail with random coefficients follows with probability 1/3.
pub fn operator(rng: &mut Rng, max_core: usize) -> FinitePotentOperator {
    let offset = rng.gen_range(-2..=2);
    let k = rng.gen_range(1..=max_core.max(1)) as i64;
    let core: Vec<i64> = (offset..offset + k).collect();
    let mut entries = random_block(rng, &core, 0.6);
    if rng.gen_bool(0.4) {
        let m = rng.gen_range(1..=3);
        let nil: Vec<i64> = (offset + k..offset + k + m).collect();
        for (a, &i) in nil.iter().enumerate() {
            for &j in &nil[a + 1..] {
                if rng.gen_bool(0.5) {
                    entries.push((i, j, small_rational(rng)));
                }
            }
            for &c in &core {
                if rng.gen_bool(0.3) {
                    entries.push((c, i, small_rational(rng)));
                }
            }
        }
    }
    let finite = SparseOperator::new(entries);
    let tail = if rng.gen_bool(1.0 / 3.0) {
        let s = rng.gen_range(1..=4);
        let start = finite.max_index().unwrap_or(0) + 1 + rng.gen_range(0..=2);
        let coeffs = (1..s).map(|_| small_rational(rng)).collect();
        Some(JordanTail::with_coeffs(s, start, coeffs))
    } else {
        None
    };
    FinitePotentOperator::new(finite, tail)
}

/// An operator without a tail, on indices `0..n` with `n ≤ max_dim`.
pub fn finite_operator(rng: &mut Rng, max_dim: usize) -> FinitePotentOperator {
    let n = rng.gen_range(1..=max_dim.max(1)) as i64;
    let idx: Vec<i64> = (0..n).collect();
    FinitePotentOperator::from_sparse(SparseOperator::new(random_block(rng, &idx, 0.6)))
}

/// A nilpotent operator: strictly upper triangular on a few indices,
/// possibly with a tail.
pub fn nilpotent_operator(rng: &mut Rng) -> FinitePotentOperator {
    let n = rng.gen_range(1..=5);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                entries.push((i, j, small_rational(rng)));
            }
        }
    }
    let tail = rng
        .gen_bool(0.5)
        .then(|| JordanTail::with_coeffs(rng.gen_range(2..=4), n + 1, vec![small_rational(rng), small_rational(rng)]));
    FinitePotentOperator::new(SparseOperator::new(entries), tail)
}

/// Random element of a number field with small coefficients.
pub fn field_element(rng: &mut Rng, field: &Arc<NumberField>) -> NumberFieldElement {
    let coeffs = (0..field.degree()).map(|_| int(rng.gen_range(-2..=2))).collect();
    field.element(Polynomial::new(coeffs))
}

/// Operator over a number field on indices `0..n`, `n ≤ max_dim`, with an
/// optional rational Jordan tail.
pub fn field_operator(rng: &mut Rng, field: &Arc<NumberField>, max_dim: usize) -> FinitePotentOperator<NumberFieldElement> {
    let n = rng.gen_range(1..=max_dim.max(1)) as i64;
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.6) {
                entries.push((i, j, field_element(rng, field)));
            }
        }
    }
    let tail = rng.gen_bool(0.3).then(|| {
        let s = rng.gen_range(2..=3);
        let coeffs = (1..s).map(|_| field.from_rational(int(rng.gen_range(-2..=2)))).collect();
        JordanTail::with_coeffs(s, n, coeffs)
    });
    FinitePotentOperator::new(SparseOperator::new(entries), tail)
}

/// `c·Π (t − aᵢ)^{eᵢ}` with distinct integer roots, sometimes times a power
/// of `t² + 1` or `t² − 2`.
pub fn rational_function(rng: &mut Rng) -> RationalFunction {
    let mut roots: Vec<i64> = (-3..=3).collect();
    roots.shuffle(rng);
    let mut f = RationalFunction::constant(int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }));
    for &a in roots.iter().take(rng.gen_range(1..=3)) {
        let e = *[-2, -1, 1, 2].choose(rng).unwrap();
        let lin = RationalFunction::from_poly(Polynomial::linear_root(int(a)));
        f = &f * &lin.pow(e).unwrap();
    }
    if rng.gen_bool(0.3) {
        let q = if rng.gen_bool(0.5) { Polynomial::from_ints(&[1, 0, 1]) } else { Polynomial::from_ints(&[-2, 0, 1]) };
        let e = *[-1, 1].choose(rng).unwrap();
        f = &f * &RationalFunction::from_poly(q).pow(e).unwrap();
    }
    if rng.gen_bool(0.3) {
        f = &f + &RationalFunction::constant(int(rng.gen_range(1..=2)));
    }
    f
}

/// Two functions with poles at a common rational point, and that place.
pub fn degree_one_pair(rng: &mut Rng) -> (RationalFunction, RationalFunction, Place) {
    let a = rng.gen_range(-2..=2);
    let u = RationalFunction::from_poly(Polynomial::linear_root(int(a)));
    let pick = |rng: &mut Rng| {
        let mut f = RationalFunction::zero();
        for k in -3..=3 {
            if rng.gen_bool(0.5) {
                f = &f + &u.pow(k).unwrap().scale(&small_rational(rng));
            }
        }
        if f.is_zero() {
            f = u.pow(-1).unwrap();
        }
        &f * &rational_function(rng).pow(if rng.gen_bool(0.2) { 1 } else { 0 }).unwrap()
    };
    let f = pick(rng);
    let g = pick(rng);
    (f, g, Place::at(int(a)))
}

/// Loop exponent with support in `1..=max_degree` and coefficients in
/// `[-1, 1]` with denominators ≤ 4.
pub fn loop_exponent(rng: &mut Rng, side: Side, max_degree: u32) -> LoopExponent {
    let mut coeffs = Vec::new();
    for n in 1..=max_degree {
        if rng.gen_bool(0.7) {
            let d = rng.gen_range(1..=4);
            coeffs.push((n, rat(rng.gen_range(-d..=d), d)));
        }
    }
    LoopExponent::new(side, coeffs).expect("degrees are positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_are_certified() {
        let mut r = rng(1);
        for _ in 0..50 {
            let op = operator(&mut r, 6);
            let cert = op.certify().unwrap();
            assert!(crate::ast::fitting(&cert.m).core_dim() <= 6);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = rational_function(&mut rng(9));
        let b = rational_function(&mut rng(9));
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }
}
