//! Operator-valued truncated series `1 + Σ_{d≥1} z^d φ_d`, exponentials
//! `exp_{z^k}(φ)`, their determinants over `k((z))`, Zassenhaus terms and
//! determinants of infinite products of exponentials.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::arith::{factorial, rat, Rational, TruncatedLaurentSeries};
use crate::det::tate_trace;
use crate::error::{Error, Result};
use crate::operator::{FinitePotentOperator, HalfSpaceSpec};

/// Variable of operator series and their determinants.
pub const Z: &str = "z";

type Op = FinitePotentOperator<Rational>;
type Series = TruncatedLaurentSeries<Rational>;

/// `1 + Σ_{1 ≤ d < prec} z^d·terms[d]`. The identity at degree zero is
/// implicit.
#[derive(Clone, Debug)]
pub struct OperatorSeries {
    var: String,
    prec: i64,
    terms: BTreeMap<i64, Op>,
}

impl OperatorSeries {
    pub fn identity(var: &str, prec: i64) -> Self {
        OperatorSeries { var: var.to_string(), prec, terms: BTreeMap::new() }
    }

    /// Panics on a term of degree below 1.
    pub fn new(var: &str, prec: i64, terms: impl IntoIterator<Item = (i64, Op)>) -> Self {
        let mut map = BTreeMap::new();
        for (d, op) in terms {
            assert!(d >= 1, "operator series terms start at degree 1");
            if d < prec && !op.is_zero() {
                map.insert(d, op);
            }
        }
        OperatorSeries { var: var.to_string(), prec, terms: map }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn term(&self, d: i64) -> Option<&Op> {
        self.terms.get(&d)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Op)> {
        self.terms.iter().map(|(d, op)| (*d, op))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let p = prec.min(self.prec);
        Self::new(&self.var, p, self.terms.iter().filter(|(d, _)| **d < p).map(|(d, o)| (*d, o.clone())))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.var != rhs.var {
            return Err(Error::VariableMismatch(self.var.clone(), rhs.var.clone()));
        }
        let p = self.prec.min(rhs.prec);
        let mut out: BTreeMap<i64, Op> = BTreeMap::new();
        let mut push = |d: i64, op: Op| -> Result<()> {
            if d >= p {
                return Ok(());
            }
            let v = match out.remove(&d) {
                Some(acc) => acc.add(&op)?,
                None => op,
            };
            out.insert(d, v);
            Ok(())
        };
        for (d, a) in &self.terms {
            push(*d, a.clone())?;
        }
        for (d, b) in &rhs.terms {
            push(*d, b.clone())?;
        }
        for (da, a) in &self.terms {
            for (db, b) in &rhs.terms {
                if da + db < p {
                    push(da + db, a.compose(b)?)?;
                }
            }
        }
        Ok(Self::new(&self.var, p, out))
    }

    /// Term-by-term equality for degrees below `degree`.
    pub fn agrees_through(&self, other: &Self, degree: i64) -> bool {
        let zero = Op::zero();
        (1..degree).all(|d| self.term(d).unwrap_or(&zero) == other.term(d).unwrap_or(&zero))
    }

    /// Restricts every term to rows and columns satisfying `keep`. Only
    /// meaningful for tail-free terms.
    pub fn filter(&self, keep: impl Fn(i64) -> bool + Copy) -> Self {
        Self::new(
            &self.var,
            self.prec,
            self.terms
                .iter()
                .map(|(d, op)| (*d, Op::new(op.finite_part().filter(keep), op.tail().cloned()))),
        )
    }

    /// The terms brought to a common tail start, and the union of their
    /// finite row supports. The span of that union is invariant under every
    /// term and contains the image of each finite part; on the rest of the
    /// space the series is the identity plus nilpotent polynomials in one
    /// Jordan shift.
    pub fn common_core(&self) -> Result<(Vec<i64>, Vec<(i64, Op)>)> {
        let degrees: Vec<i64> = self.terms.keys().copied().collect();
        let ops: Vec<Op> = self.terms.values().cloned().collect();
        let aligned = Op::align_all(&ops).map_err(|e| Error::NoCommonCore(e.to_string()))?;
        let mut rows = BTreeSet::new();
        for op in &aligned {
            rows.extend(op.finite_part().row_support());
        }
        Ok((rows.into_iter().collect(), degrees.into_iter().zip(aligned).collect()))
    }
}

/// `Σ_{jk < prec} z^{jk} φ^j / j!`.
pub fn exp_op(phi: &Op, k: i64, prec: i64) -> Result<OperatorSeries> {
    if k < 1 {
        return Err(Error::Precondition(format!("exponential weight must be positive, got {k}")));
    }
    phi.certify()?;
    let mut terms = Vec::new();
    let mut power = phi.clone();
    let mut j = 1i64;
    while j * k < prec && !power.is_zero() {
        terms.push((j * k, power.scale(&(Rational::from_integer(1.into()) / factorial(j as u64)))));
        power = power.compose(phi)?;
        j += 1;
    }
    Ok(OperatorSeries::new(Z, prec, terms))
}

/// Determinant over `k((z))` of `1 + Σ z^d φ_d`, computed on the common
/// core by elimination over truncated series. Every matrix in play is the
/// identity modulo `z`, so pivots are units and no pivoting is needed.
pub fn det_series(s: &OperatorSeries) -> Result<Series> {
    let (core, terms) = s.common_core()?;
    let n = core.len();
    let var = s.var();
    let prec = s.precision();
    let mut a: Vec<Vec<Series>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Series::one(var, prec) } else { Series::zero(var, prec) })
                .collect()
        })
        .collect();
    for (d, op) in &terms {
        let m = op.finite_part().restrict(&core);
        for (i, row) in a.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let c = &m[(i, j)];
                if !c.is_zero() {
                    *entry = entry.add(&Series::monomial(var, c.clone(), *d, prec))?;
                }
            }
        }
    }
    series_det(a, var, prec)
}

fn series_det(mut a: Vec<Vec<Series>>, var: &str, prec: i64) -> Result<Series> {
    let n = a.len();
    let mut det = Series::one(var, prec);
    for k in 0..n {
        let pivot = a[k][k].clone();
        det = det.mul(&pivot)?;
        let inv = pivot.inverse()?;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].mul(&inv)?;
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                a[i][j] = a[i][j].sub(&factor.mul(&a[k][j])?)?;
            }
        }
    }
    Ok(det)
}

/// `C₁ = [f,g]`, `C₂ = 2[[f,g],g] − [f,[f,g]]`,
/// `C₃ = 3[[[f,g],g],g] − 3[[f,[f,g]],g] + [f,[f,[f,g]]]`.
pub fn zassenhaus_terms(f: &Op, g: &Op) -> Result<(Op, Op, Op)> {
    let fg = f.commutator(g)?;
    let fg_g = fg.commutator(g)?;
    let f_fg = f.commutator(&fg)?;
    let c2 = fg_g.scale(&rat(2, 1)).sub(&f_fg)?;
    let fg_g_g = fg_g.commutator(g)?;
    let f_fg_g = f_fg.commutator(g)?;
    let f_f_fg = f.commutator(&f_fg)?;
    let c3 = fg_g_g.scale(&rat(3, 1)).sub(&f_fg_g.scale(&rat(3, 1)))?.add(&f_f_fg)?;
    Ok((fg, c2, c3))
}

/// The right-hand side `exp f · exp g · Π_{i=1}^{3} exp_{z^{i+1}}(−C_i/(i+1)!)`.
pub fn zassenhaus_product(f: &Op, g: &Op, prec: i64) -> Result<OperatorSeries> {
    let (c1, c2, c3) = zassenhaus_terms(f, g)?;
    let mut rhs = exp_op(f, 1, prec)?.mul(&exp_op(g, 1, prec)?)?;
    for (i, c) in [(1i64, c1), (2, c2), (3, c3)] {
        let scaled = c.scale(&(-Rational::from_integer(1.into()) / factorial((i + 1) as u64)));
        rhs = rhs.mul(&exp_op(&scaled, i + 1, prec)?)?;
    }
    Ok(rhs)
}

/// Checks `exp(f + g) = exp f · exp g · Π exp_{z^{i+1}}(−C_i/(i+1)!)` through
/// degree `prec − 1`; the three displayed terms suffice up to `z⁴`.
pub fn zassenhaus_check(f: &Op, g: &Op, prec: i64) -> Result<bool> {
    if !(1..=5).contains(&prec) {
        return Err(Error::Precondition(format!("Zassenhaus check holds through z^4 only; prec {prec} is out of range")));
    }
    let lhs = exp_op(&f.add(g)?, 1, prec)?;
    let rhs = zassenhaus_product(f, g, prec)?;
    Ok(lhs.agrees_through(&rhs, prec))
}

/// `Π_{i < m} Det exp_{z^{w_i}}(φ_i)` for a family indexed from 1, where every
/// `φ_i` with `i ≥ m` must have zero trace. The product is recomputed up to
/// `m + 2` and must not change.
pub fn infinite_product_det(family: &[(i64, Op)], compat_m: usize, prec: i64) -> Result<Series> {
    let cut = HalfSpaceSpec { cut: 0 };
    for (idx, (_, phi)) in family.iter().enumerate() {
        if !phi.classify(cut).in_e0 {
            return Err(Error::Precondition(format!("family member {} is not in E0", idx + 1)));
        }
    }
    for (idx, (_, phi)) in family.iter().enumerate() {
        let i = idx + 1;
        if i >= compat_m {
            let t = tate_trace(phi)?;
            if !t.is_zero() {
                return Err(Error::CompatibilityViolated { index: i, trace: crate::arith::format_rational(&t) });
            }
        }
    }
    let partial = |upto: usize| -> Result<Series> {
        let mut acc = Series::one(Z, prec);
        for (idx, (w, phi)) in family.iter().enumerate() {
            if idx + 1 >= upto {
                break;
            }
            acc = acc.mul(&det_series(&exp_op(phi, *w, prec)?)?)?;
        }
        Ok(acc)
    };
    let value = partial(compat_m)?;
    let further = partial(compat_m + 2)?;
    if value != further {
        return Err(Error::CheckFailed(format!("product moved past index {compat_m}: {value} vs {further}")));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::operator::{JordanTail, SparseOperator};

    fn op(e: &[(i64, i64, i64)]) -> Op {
        SparseOperator::new(e.iter().map(|&(i, j, c)| (i, j, int(c)))).into()
    }

    fn exp_scalar(c: Rational, k: i64, prec: i64) -> Series {
        Series::monomial(Z, c, k, prec).exp().unwrap()
    }

    #[test]
    fn exponential_examples() {
        let n = op(&[(0, 1, 1)]);
        let e = exp_op(&n, 1, 10).unwrap();
        assert_eq!(e.terms().count(), 1);
        assert_eq!(e.term(1), Some(&n));
        assert_eq!(exp_op(&Op::zero(), 1, 10).unwrap().terms().count(), 0);
        let p = op(&[(0, 0, 1)]);
        let e = exp_op(&p, 2, 5).unwrap();
        assert_eq!(e.term(2), Some(&p));
        assert_eq!(e.term(4), Some(&p.scale(&rat(1, 2))));
        assert_eq!(e.terms().count(), 2);
    }

    #[test]
    fn determinant_of_exponential_is_exponential_of_trace() {
        assert_eq!(det_series(&exp_op(&op(&[(0, 1, 1)]), 1, 10).unwrap()).unwrap(), Series::one(Z, 10));
        let p = op(&[(0, 0, 1)]);
        assert_eq!(det_series(&exp_op(&p, 1, 10).unwrap()).unwrap(), exp_scalar(int(1), 1, 10));
        let phi = op(&[(0, 0, 2), (0, 1, 1), (1, 0, 3), (1, 1, -1), (2, 0, 1)]);
        assert_eq!(det_series(&exp_op(&phi, 2, 10).unwrap()).unwrap(), exp_scalar(int(1), 2, 10));
        let t = FinitePotentOperator::new(SparseOperator::new([(0, 0, int(3))]), Some(JordanTail::jordan(3, 2)));
        assert_eq!(det_series(&exp_op(&t, 1, 8).unwrap()).unwrap(), exp_scalar(int(3), 1, 8));
    }

    #[test]
    fn zassenhaus_examples() {
        let f = op(&[(1, 0, 1)]);
        let g = op(&[(0, 1, 1)]);
        let (c1, _, _) = zassenhaus_terms(&f, &g).unwrap();
        assert_eq!(c1, op(&[(0, 0, -1), (1, 1, 1)]));
        assert!(zassenhaus_check(&f, &g, 5).unwrap());
        let (a, b, c) = zassenhaus_terms(&f, &Op::zero()).unwrap();
        assert!(a.is_zero() && b.is_zero() && c.is_zero());
        assert!(zassenhaus_check(&f, &f, 5).unwrap());
        let d = op(&[(0, 0, 1), (1, 1, 2)]);
        let e = op(&[(0, 0, 3)]);
        let (a, b, c) = zassenhaus_terms(&d, &e).unwrap();
        assert!(a.is_zero() && b.is_zero() && c.is_zero());
        assert!(zassenhaus_check(&d, &e, 5).unwrap());
        assert!(zassenhaus_check(&f, &g, 6).is_err());
    }

    #[test]
    fn zassenhaus_needs_the_correction_terms() {
        let f = op(&[(1, 0, 1), (0, 0, 2)]);
        let g = op(&[(0, 1, 1), (1, 1, -1)]);
        let plain = exp_op(&f, 1, 5).unwrap().mul(&exp_op(&g, 1, 5).unwrap()).unwrap();
        let lhs = exp_op(&f.add(&g).unwrap(), 1, 5).unwrap();
        assert!(!lhs.agrees_through(&plain, 5));
        assert!(zassenhaus_check(&f, &g, 5).unwrap());
    }

    #[test]
    fn infinite_products() {
        let zero_trace = op(&[(0, 1, 1)]);
        let fam = vec![(2, zero_trace.clone()), (3, zero_trace.clone())];
        assert_eq!(infinite_product_det(&fam, 1, 10).unwrap(), Series::one(Z, 10));

        let c = op(&[(0, 0, 5)]);
        let fam = vec![(2, c.clone()), (3, zero_trace.clone()), (4, zero_trace.clone())];
        assert_eq!(infinite_product_det(&fam, 2, 10).unwrap(), exp_scalar(int(5), 2, 10));

        let c2 = op(&[(0, 0, 1), (1, 1, 1)]);
        let fam = vec![(2, c.clone()), (3, c2.clone()), (4, zero_trace.clone())];
        let both = Series::new(Z, 10, [(2, int(5)), (3, int(2))]).exp().unwrap();
        assert_eq!(infinite_product_det(&fam, 3, 10).unwrap(), both);

        let err = infinite_product_det(&fam, 2, 10).unwrap_err();
        assert!(matches!(err, Error::CompatibilityViolated { index: 2, .. }));
    }
}
