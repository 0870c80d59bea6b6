//! Endomorphisms of a vector space with basis `e_i`, `i ∈ ℤ`.
//!
//! Representable operators are a finite sparse matrix plus an optional
//! nilpotent tail `p(J)` acting on `span{e_i : i ≥ start}`, where `J` shifts
//! `e_i ↦ e_{i+1}` inside consecutive blocks of a fixed size and kills the
//! last vector of each block. `p` has no constant term, so the tail is
//! nilpotent. Finite potency and every derived quantity are proved only for
//! operators in this class.
//!
//! The finite part is always kept strictly below the tail start. Where an
//! operation would break this, the leading tail blocks are written out into
//! the finite part first ("materialized").

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::{Matrix, Rational, Ring};
use crate::error::{Error, Result};

pub type SparseVector<F = Rational> = BTreeMap<i64, F>;

fn add_into<F: Ring>(v: &mut SparseVector<F>, i: i64, c: F) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(i).or_insert_with(F::zero);
    *e = std::mem::replace(e, F::zero()) + c;
    if e.is_zero() {
        v.remove(&i);
    }
}

/// A finite-support matrix. Never stores zero entries.
#[derive(Clone, PartialEq)]
pub struct SparseOperator<F = Rational> {
    entries: BTreeMap<(i64, i64), F>,
}

impl<F: Ring> SparseOperator<F> {
    /// Sums duplicate positions and drops zeros.
    pub fn new(entries: impl IntoIterator<Item = (i64, i64, F)>) -> Self {
        let mut map: BTreeMap<(i64, i64), F> = BTreeMap::new();
        for (i, j, c) in entries {
            if c.is_zero() {
                continue;
            }
            let e = map.entry((i, j)).or_insert_with(F::zero);
            *e = std::mem::replace(e, F::zero()) + c;
        }
        map.retain(|_, c| !c.is_zero());
        SparseOperator { entries: map }
    }

    pub fn zero() -> Self {
        SparseOperator { entries: BTreeMap::new() }
    }

    pub fn identity_on(indices: impl IntoIterator<Item = i64>) -> Self {
        Self::new(indices.into_iter().map(|i| (i, i, F::one())))
    }

    /// Places `m[(a, b)]` at `(indices[a], indices[b])`.
    pub fn from_matrix(indices: &[i64], m: &Matrix<F>) -> Self {
        let mut out = Vec::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out.push((i, j, m[(a, b)].clone()));
            }
        }
        Self::new(out)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &F)> {
        self.entries.iter().map(|((i, j), c)| (*i, *j, c))
    }

    pub fn get(&self, i: i64, j: i64) -> F {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn row_support(&self) -> BTreeSet<i64> {
        self.entries.keys().map(|(i, _)| *i).collect()
    }

    pub fn col_support(&self) -> BTreeSet<i64> {
        self.entries.keys().map(|(_, j)| *j).collect()
    }

    /// Rows and columns together.
    pub fn support(&self) -> BTreeSet<i64> {
        self.entries.keys().flat_map(|(i, j)| [*i, *j]).collect()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.keys().map(|(i, j)| *i.max(j)).max()
    }

    pub fn apply(&self, v: &SparseVector<F>) -> SparseVector<F> {
        let mut out = SparseVector::new();
        for ((i, j), c) in &self.entries {
            if let Some(x) = v.get(j) {
                add_into(&mut out, *i, c.clone() * x.clone());
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(self.entries().chain(rhs.entries()).map(|(i, j, c)| (i, j, c.clone())))
    }

    pub fn neg(&self) -> Self {
        SparseOperator { entries: self.entries.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.entries().map(|(i, j, c)| (i, j, c.scale(q))))
    }

    pub fn scale_by(&self, s: &F) -> Self {
        Self::new(self.entries().map(|(i, j, c)| (i, j, c.clone() * s.clone())))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut by_col: BTreeMap<i64, Vec<(i64, &F)>> = BTreeMap::new();
        for ((i, j), c) in &self.entries {
            by_col.entry(*j).or_default().push((*i, c));
        }
        let mut out: BTreeMap<(i64, i64), F> = BTreeMap::new();
        for ((j, k), b) in &rhs.entries {
            if let Some(col) = by_col.get(j) {
                for (i, a) in col {
                    let e = out.entry((*i, *k)).or_insert_with(F::zero);
                    *e = std::mem::replace(e, F::zero()) + (*a).clone() * b.clone();
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        SparseOperator { entries: out }
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.compose(rhs).sub(&rhs.compose(self))
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> F {
        self.entries
            .iter()
            .filter(|((i, j), _)| i == j)
            .fold(F::zero(), |acc, (_, c)| acc + c.clone())
    }

    /// Dense matrix on the given ordered index list.
    pub fn restrict(&self, indices: &[i64]) -> Matrix<F> {
        let pos: BTreeMap<i64, usize> = indices.iter().enumerate().map(|(a, i)| (*i, a)).collect();
        let mut m = Matrix::zeros(indices.len(), indices.len());
        for ((i, j), c) in &self.entries {
            if let (Some(&a), Some(&b)) = (pos.get(i), pos.get(j)) {
                m[(a, b)] = c.clone();
            }
        }
        m
    }

    /// Keeps only entries whose row and column both satisfy `keep`.
    pub fn filter(&self, keep: impl Fn(i64) -> bool) -> Self {
        SparseOperator {
            entries: self
                .entries
                .iter()
                .filter(|((i, j), _)| keep(*i) && keep(*j))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Conjugation by the index shift `e_i ↦ e_{i+k}`.
    pub fn shift(&self, k: i64) -> Self {
        SparseOperator { entries: self.entries.iter().map(|((i, j), c)| ((i + k, j + k), c.clone())).collect() }
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// `p(J) = Σ_{k=1}^{s−1} c_k J^k` on `span{e_i : i ≥ start}`, with `J`
/// the Jordan shift on consecutive blocks of size `s`.
#[derive(Clone, PartialEq)]
pub struct JordanTail<F = Rational> {
    block_size: usize,
    start: i64,
    coeffs: Vec<F>,
}

impl<F: Ring> JordanTail<F> {
    /// The plain shift `J`.
    pub fn jordan(block_size: usize, start: i64) -> Self {
        Self::with_coeffs(block_size, start, vec![F::one()])
    }

    /// `coeffs[k − 1]` is the coefficient of `J^k`; powers `≥ block_size`
    /// vanish and are dropped.
    pub fn with_coeffs(block_size: usize, start: i64, mut coeffs: Vec<F>) -> Self {
        assert!(block_size >= 1, "block size must be positive");
        coeffs.truncate(block_size - 1);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        JordanTail { block_size, start, coeffs }
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest power of `J` present.
    fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).map_or(usize::MAX, |k| k + 1)
    }

    /// Smallest `n` with `p(J)^n = 0`.
    pub fn nilpotency_index(&self) -> usize {
        if self.is_zero() {
            return 1;
        }
        self.block_size.div_ceil(self.valuation())
    }

    /// First block boundary at or after `x`.
    pub fn block_boundary_from(&self, x: i64) -> i64 {
        if x <= self.start {
            return self.start;
        }
        let s = self.block_size as i64;
        self.start + (x - self.start + s - 1) / s * s
    }

    fn apply_basis(&self, i: i64) -> SparseVector<F> {
        let mut out = SparseVector::new();
        if i < self.start {
            return out;
        }
        let pos = ((i - self.start) % self.block_size as i64) as usize;
        for (k, c) in self.coeffs.iter().enumerate() {
            let k = k + 1;
            if pos + k < self.block_size {
                add_into(&mut out, i + k as i64, c.clone());
            }
        }
        out
    }

    /// Entries of the tail on the blocks in `[from, to)`; both bounds must
    /// be block boundaries.
    fn entries_between(&self, from: i64, to: i64) -> Vec<(i64, i64, F)> {
        let mut out = Vec::new();
        let mut b = from;
        while b < to {
            for pos in 0..self.block_size {
                for (k, c) in self.coeffs.iter().enumerate() {
                    let k = k + 1;
                    if pos + k < self.block_size {
                        out.push((b + (pos + k) as i64, b + pos as i64, c.clone()));
                    }
                }
            }
            b += self.block_size as i64;
        }
        out
    }

    fn with_start(&self, start: i64) -> Self {
        JordanTail { block_size: self.block_size, start, coeffs: self.coeffs.clone() }
    }

    /// Coefficients with index 0 standing for `J⁰` (always 0 here).
    fn full_coeffs(&self) -> Vec<F> {
        let mut v = vec![F::zero(); self.block_size];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k + 1] = c.clone();
        }
        v
    }

    fn from_full(block_size: usize, start: i64, full: Vec<F>) -> Self {
        Self::with_coeffs(block_size, start, full.into_iter().skip(1).collect())
    }

    fn combine(&self, rhs: &Self, f: impl Fn(&[F], &[F]) -> Vec<F>) -> Self {
        debug_assert_eq!((self.block_size, self.start), (rhs.block_size, rhs.start));
        Self::from_full(self.block_size, self.start, f(&self.full_coeffs(), &rhs.full_coeffs()))
    }

    /// Product of the polynomials, truncated at `J^{s}`.
    fn mul_poly(a: &[F], b: &[F], s: usize) -> Vec<F> {
        let mut out = vec![F::zero(); s];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < s {
                    out[i + j] = out[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        out
    }

    /// The tail as a polynomial in `J`, lowest degree first, including the
    /// zero constant term.
    pub fn polynomial(&self) -> Vec<F> {
        self.full_coeffs()
    }

    /// Builds a tail from a polynomial in `J` whose constant term is zero.
    pub fn from_polynomial(block_size: usize, start: i64, p: Vec<F>) -> Self {
        debug_assert!(p.first().is_none_or(|c| c.is_zero()));
        let mut p = p;
        p.resize(block_size.max(1), F::zero());
        Self::from_full(block_size, start, p)
    }

    /// Product of two polynomials in `J`, truncated at `J^{block_size}`.
    pub fn poly_mul(a: &[F], b: &[F], block_size: usize) -> Vec<F> {
        Self::mul_poly(a, b, block_size)
    }
}

impl<F: fmt::Debug> fmt::Debug for JordanTail<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tail(size {}, from {}, coeffs {:?})", self.block_size, self.start, self.coeffs)
    }
}

/// A finite sparse part plus an optional nilpotent Jordan tail.
#[derive(Clone)]
pub struct FinitePotentOperator<F = Rational> {
    finite: SparseOperator<F>,
    tail: Option<JordanTail<F>>,
}

/// Witness of finite potency: `φ(W) ⊆ span W`, `φⁿ V ⊆ span W`, and `m` is
/// the matrix of `φ|_W` on the sorted index list `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<F = Rational> {
    pub n: usize,
    pub w: Vec<i64>,
    pub m: Matrix<F>,
}

/// `V₊ = span{e_i : i ≥ cut}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfSpaceSpec {
    pub cut: i64,
}

/// Membership in the operator classes attached to a half space. `A < B`
/// means `(A + B)/B` is finite-dimensional.
///
/// * `E`: `φ(V₊) < V₊`
/// * `E₁`: `φ(V) < V₊`
/// * `E₂`: `φ(V₊) < 0`
/// * `E₀ = E₁ ∩ E₂`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperatorClass {
    pub in_e: bool,
    pub in_e1: bool,
    pub in_e2: bool,
    pub in_e0: bool,
}

impl<F: Ring> FinitePotentOperator<F> {
    pub fn new(finite: SparseOperator<F>, tail: Option<JordanTail<F>>) -> Self {
        let tail = tail.filter(|t| !t.is_zero());
        let op = FinitePotentOperator { finite, tail };
        match (&op.tail, op.finite.max_index()) {
            (Some(t), Some(m)) if m >= t.start => {
                let s = t.block_boundary_from(m + 1);
                op.materialize_to(s)
            }
            _ => op,
        }
    }

    pub fn from_sparse(finite: SparseOperator<F>) -> Self {
        FinitePotentOperator { finite, tail: None }
    }

    pub fn zero() -> Self {
        Self::from_sparse(SparseOperator::zero())
    }

    pub fn finite_part(&self) -> &SparseOperator<F> {
        &self.finite
    }

    pub fn tail(&self) -> Option<&JordanTail<F>> {
        self.tail.as_ref()
    }

    /// `Some` when there is no tail.
    pub fn as_finite_rank(&self) -> Option<&SparseOperator<F>> {
        self.tail.is_none().then_some(&self.finite)
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_zero() && self.tail.is_none()
    }

    /// Moves the tail start to the block boundary `new_start`, writing the
    /// skipped blocks into the finite part.
    pub fn materialize_to(&self, new_start: i64) -> Self {
        let Some(t) = &self.tail else { return self.clone() };
        if new_start <= t.start {
            return self.clone();
        }
        debug_assert_eq!((new_start - t.start) % t.block_size as i64, 0);
        let extra = t.entries_between(t.start, new_start);
        FinitePotentOperator {
            finite: SparseOperator::new(self.finite.entries().map(|(i, j, c)| (i, j, c.clone())).chain(extra)),
            tail: Some(t.with_start(new_start)),
        }
    }

    /// Brings both operators to a common tail start that lies above both
    /// finite parts.
    pub fn align(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let (size, base) = match (&a.tail, &b.tail) {
            (None, None) => return Ok((a.clone(), b.clone())),
            (Some(t), None) | (None, Some(t)) => (t.block_size, t.start),
            (Some(s), Some(t)) => {
                if s.block_size != t.block_size {
                    return Err(Error::IncompatibleTails(format!(
                        "block sizes {} and {}",
                        s.block_size, t.block_size
                    )));
                }
                if (s.start - t.start).rem_euclid(s.block_size as i64) != 0 {
                    return Err(Error::IncompatibleTails(format!(
                        "tail blocks at {} and {} are not aligned",
                        s.start, t.start
                    )));
                }
                (s.block_size, s.start.max(t.start))
            }
        };
        let mut need = base;
        for op in [a, b] {
            if let Some(m) = op.finite.max_index() {
                need = need.max(m + 1);
            }
            if let Some(t) = &op.tail {
                need = need.max(t.start);
            }
        }
        let probe = JordanTail::<F>::with_coeffs(size, base, Vec::new());
        let s = probe.block_boundary_from(need);
        Ok((a.materialize_to(s), b.materialize_to(s)))
    }

    /// Brings every operator to one common tail start.
    pub fn align_all(ops: &[Self]) -> Result<Vec<Self>> {
        let Some(first) = ops.first() else { return Ok(Vec::new()) };
        let mut acc = first.clone();
        for op in &ops[1..] {
            let (a, b) = Self::align(&acc, op)?;
            acc = if a.tail.is_some() { a } else { b };
        }
        match acc.tail.as_ref().map(|t| t.start) {
            Some(s) => Ok(ops.iter().map(|op| op.materialize_to(s)).collect()),
            None => Ok(ops.to_vec()),
        }
    }

    pub fn apply(&self, v: &SparseVector<F>) -> SparseVector<F> {
        let mut out = self.finite.apply(v);
        if let Some(t) = &self.tail {
            for (i, x) in v.range(t.start..) {
                for (k, c) in t.apply_basis(*i) {
                    add_into(&mut out, k, c * x.clone());
                }
            }
        }
        out
    }

    pub fn apply_basis(&self, i: i64) -> SparseVector<F> {
        self.apply(&SparseVector::from([(i, F::one())]))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = Self::align(self, rhs)?;
        let tail = match (&a.tail, &b.tail) {
            (Some(s), Some(t)) => Some(s.combine(t, |x, y| x.iter().zip(y).map(|(p, q)| p.clone() + q.clone()).collect())),
            (Some(t), None) | (None, Some(t)) => Some(t.clone()),
            (None, None) => None,
        };
        Ok(Self::new(a.finite.add(&b.finite), tail))
    }

    pub fn neg(&self) -> Self {
        FinitePotentOperator {
            finite: self.finite.neg(),
            tail: self.tail.as_ref().map(|t| JordanTail::with_coeffs(t.block_size, t.start, t.coeffs.iter().map(|c| -c.clone()).collect())),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(
            self.finite.scale(q),
            self.tail.as_ref().map(|t| JordanTail::with_coeffs(t.block_size, t.start, t.coeffs.iter().map(|c| c.scale(q)).collect())),
        )
    }

    pub fn scale_by(&self, s: &F) -> Self {
        Self::new(
            self.finite.scale_by(s),
            self.tail.as_ref().map(|t| JordanTail::with_coeffs(t.block_size, t.start, t.coeffs.iter().map(|c| c.clone() * s.clone()).collect())),
        )
    }

    /// `self ∘ rhs`. After alignment the finite parts live below the common
    /// tail start and the tails above it, so the cross terms vanish.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = Self::align(self, rhs)?;
        let tail = match (&a.tail, &b.tail) {
            (Some(s), Some(t)) => Some(s.combine(t, |x, y| JordanTail::mul_poly(x, y, s.block_size))),
            _ => None,
        };
        Ok(Self::new(a.finite.compose(&b.finite), tail))
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        let mut acc: Option<Self> = None;
        for _ in 0..n {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.compose(self)?,
            });
        }
        Ok(acc.unwrap_or_else(|| panic!("pow(0) is the identity, which is not finite potent")))
    }

    /// `W` = rows of the finite part, `n` = nilpotency index of the tail.
    pub fn certify(&self) -> Result<Certificate<F>> {
        let w: Vec<i64> = self.finite.row_support().into_iter().collect();
        let m = self.finite.restrict(&w);
        let n = self.tail.as_ref().map_or(1, |t| t.nilpotency_index().max(1));
        Ok(Certificate { n, w, m })
    }

    /// A finite-rank operator lies in `E₀` for every half space. A nonzero
    /// tail preserves every `V₊` and has image inside `V₊` up to finitely
    /// many vectors, but is nonzero on infinitely many vectors of `V₊`.
    pub fn classify(&self, _h: HalfSpaceSpec) -> OperatorClass {
        let finite_rank = self.tail.is_none();
        OperatorClass { in_e: true, in_e1: true, in_e2: finite_rank, in_e0: finite_rank }
    }

    /// Largest index touched by the finite part or the start of the tail.
    pub fn extent(&self) -> Option<i64> {
        let m = self.finite.max_index();
        match &self.tail {
            Some(t) => Some(m.map_or(t.start, |m| m.max(t.start))),
            None => m,
        }
    }
}

impl<F: Ring> PartialEq for FinitePotentOperator<F> {
    fn eq(&self, other: &Self) -> bool {
        match Self::align(self, other) {
            Ok((a, b)) => a.finite == b.finite && a.tail == b.tail,
            Err(_) => false,
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for FinitePotentOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Op {{ finite: {:?}, tail: {:?} }}", self.finite, self.tail)
    }
}

impl<F: Ring> From<SparseOperator<F>> for FinitePotentOperator<F> {
    fn from(s: SparseOperator<F>) -> Self {
        Self::from_sparse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn sp(e: &[(i64, i64, i64)]) -> SparseOperator {
        SparseOperator::new(e.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    fn op(e: &[(i64, i64, i64)]) -> FinitePotentOperator {
        sp(e).into()
    }

    fn basis(i: i64) -> SparseVector {
        SparseVector::from([(i, int(1))])
    }

    #[test]
    fn apply_examples() {
        assert_eq!(op(&[(0, 1, 1)]).apply(&basis(1)), basis(0));
        assert!(op(&[]).apply(&basis(3)).is_empty());
        let t = FinitePotentOperator::<Rational>::new(SparseOperator::zero(), Some(JordanTail::jordan(2, 10)));
        assert_eq!(t.apply(&basis(10)), basis(11));
        assert!(t.apply(&basis(11)).is_empty());
        assert_eq!(t.apply(&basis(12)), basis(13));
        assert!(t.apply(&basis(9)).is_empty());
    }

    #[test]
    fn commutator_of_swaps() {
        let phi = op(&[(1, 0, 1)]);
        let psi = op(&[(0, 1, 1)]);
        let c = phi.commutator(&psi).unwrap();
        assert_eq!(c, op(&[(0, 0, -1), (1, 1, 1)]));
        let p = op(&[(0, 0, 1)]);
        assert!(p.commutator(&p).unwrap().is_zero());
    }

    #[test]
    fn materializing_keeps_the_operator() {
        let t = FinitePotentOperator::new(sp(&[(11, 3, 2)]), Some(JordanTail::jordan(3, 10)));
        assert_eq!(t.tail().unwrap().start(), 13);
        assert_eq!(t.finite_part().get(11, 10), int(1));
        assert_eq!(t.finite_part().get(12, 11), int(1));
        assert_eq!(t.finite_part().get(11, 3), int(2));
        for i in 0..30 {
            let direct = {
                let mut v = sp(&[(11, 3, 2)]).apply(&basis(i));
                for (k, c) in JordanTail::<Rational>::jordan(3, 10).apply_basis(i) {
                    add_into(&mut v, k, c);
                }
                v
            };
            assert_eq!(t.apply(&basis(i)), direct, "e_{i}");
        }
    }

    #[test]
    fn tails_compose_as_polynomials_in_j() {
        let j = FinitePotentOperator::<Rational>::new(SparseOperator::zero(), Some(JordanTail::jordan(3, 0)));
        let j2 = j.compose(&j).unwrap();
        assert_eq!(j2.apply(&basis(0)), basis(2));
        assert!(j2.apply(&basis(1)).is_empty());
        assert!(j2.compose(&j).unwrap().is_zero());
    }

    #[test]
    fn misaligned_tails_are_rejected() {
        let a = FinitePotentOperator::<Rational>::new(SparseOperator::zero(), Some(JordanTail::jordan(3, 0)));
        let b = FinitePotentOperator::new(SparseOperator::zero(), Some(JordanTail::jordan(3, 1)));
        let c = FinitePotentOperator::new(SparseOperator::zero(), Some(JordanTail::jordan(2, 0)));
        assert!(matches!(a.add(&b), Err(Error::IncompatibleTails(_))));
        assert!(matches!(a.compose(&c), Err(Error::IncompatibleTails(_))));
    }

    #[test]
    fn certificates() {
        let c = op(&[(0, 0, 2)]).certify().unwrap();
        assert_eq!((c.n, c.w.clone()), (1, vec![0]));
        assert_eq!(c.m, Matrix::from_ints(&[&[2]]));
        let c = op(&[(0, 1, 1)]).certify().unwrap();
        assert_eq!(c.w, vec![0]);
        assert_eq!(c.m, Matrix::from_ints(&[&[0]]));
        let t = FinitePotentOperator::new(sp(&[(0, 0, 1)]), Some(JordanTail::jordan(3, 10)));
        let c = t.certify().unwrap();
        assert_eq!((c.n, c.w.clone()), (3, vec![0]));
        assert_eq!(c.m, Matrix::from_ints(&[&[1]]));
    }

    #[test]
    fn classification() {
        let h = HalfSpaceSpec { cut: 0 };
        let proj = op(&[(0, 0, 1), (1, 1, 1)]);
        let c = proj.classify(h);
        assert!(c.in_e && c.in_e1 && c.in_e2 && c.in_e0);
        let t = FinitePotentOperator::<Rational>::new(SparseOperator::zero(), Some(JordanTail::jordan(2, -5)));
        let c = t.classify(h);
        assert!(c.in_e && c.in_e1 && !c.in_e2 && !c.in_e0);
    }
}
