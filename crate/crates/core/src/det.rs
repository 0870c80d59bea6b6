//! Tate trace and the determinant `Det(1 + φ)` of finite potent operators,
//! by several independent routes.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{factorial, Field, Matrix, NumberField, NumberFieldElement, Polynomial, Rational, TruncatedLaurentSeries};
use crate::ast::lift_ast;
use crate::error::{Error, Result};
use crate::operator::{FinitePotentOperator, JordanTail, SparseOperator};

/// Variable name of determinant polynomials and series.
pub const MU: &str = "mu";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `det(1 + core)` on the Fitting core.
    Ast,
    /// `1 + Σ_r tr Λ^r φ`.
    Exterior,
    /// `(−1)^n χ(−1)` for the certificate matrix.
    Charpoly,
    /// Determinant expansion in power-sum traces, at `μ = 1`.
    PlemeljSmithies,
    /// `exp tr log(1 + μφ)` at `μ = 1`.
    Logdet,
}

impl Route {
    pub const ALL: [Route; 5] = [Route::Ast, Route::Exterior, Route::Charpoly, Route::PlemeljSmithies, Route::Logdet];

    pub fn name(self) -> &'static str {
        match self {
            Route::Ast => "ast",
            Route::Exterior => "exterior",
            Route::Charpoly => "charpoly",
            Route::PlemeljSmithies => "plemelj_smithies",
            Route::Logdet => "logdet",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetResult<F = Rational> {
    pub value: F,
    pub route: Route,
}

/// Trace of `φ` on its invertible core.
pub fn tate_trace<F: Field>(phi: &FinitePotentOperator<F>) -> Result<F> {
    Ok(lift_ast(phi)?.core_matrix.trace())
}

/// `det(1 + core)`.
pub fn det_one_plus<F: Field>(phi: &FinitePotentOperator<F>) -> Result<F> {
    let core = lift_ast(phi)?.core_matrix;
    Ok(Matrix::identity(core.rows()).add(&core).det())
}

/// Elementary symmetric functions `e_0 = 1, e_1, …, e_n` of the eigenvalues,
/// read off the characteristic polynomial.
fn elementary_symmetric<F: Field>(m: &Matrix<F>) -> Vec<F> {
    let c = m.charpoly_coeffs();
    let n = m.rows();
    (0..=n)
        .map(|r| if r % 2 == 0 { c[n - r].clone() } else { -c[n - r].clone() })
        .collect()
}

/// `tr Λ^r φ` for `r ≥ 1`; zero beyond the core dimension.
pub fn exterior_trace<F: Field>(phi: &FinitePotentOperator<F>, r: usize) -> Result<F> {
    let core = lift_ast(phi)?.core_matrix;
    Ok(elementary_symmetric(&core).get(r).cloned().unwrap_or_else(F::zero))
}

/// `det(1 + μ·core)` as a polynomial in `μ`.
pub fn det_poly(phi: &FinitePotentOperator) -> Result<Polynomial> {
    let core = lift_ast(phi)?.core_matrix;
    Ok(Polynomial::new(elementary_symmetric(&core)))
}

/// Characteristic polynomial `det(x − M)`.
pub fn char_poly(m: &Matrix<Rational>) -> Polynomial {
    Polynomial::new(m.charpoly_coeffs())
}

/// `tate_trace(φ^j)` for `j = 1..=count`.
///
/// The certified subspace `W` is invariant under every power and contains
/// each power's core, so these are the power traces of the certificate
/// matrix.
pub fn power_traces<F: Field>(phi: &FinitePotentOperator<F>, count: usize) -> Result<Vec<F>> {
    Ok(phi.certify()?.m.power_traces(count))
}

/// `α_m`: determinant of the `m × m` matrix with `p_1` on the diagonal,
/// `p_k` on the `(k−1)`-th subdiagonal and `m−1, m−2, …, 1` on the
/// superdiagonal. `p[0]` is `p_1`.
pub fn plemelj_smithies_alpha(p: &[Rational], m: usize) -> Rational {
    if m == 0 {
        return Rational::one();
    }
    let a = Matrix::from_fn(m, m, |i, j| {
        if j == i + 1 {
            Rational::from_integer(((m - 1 - i) as i64).into())
        } else if j <= i {
            p[i - j].clone()
        } else {
            Rational::zero()
        }
    });
    a.det()
}

/// `Σ_{m ≤ order} μ^m α_m / m!` with `α_m` built from `tate_trace(φ^j)`.
pub fn plemelj_smithies_series(phi: &FinitePotentOperator, order: usize) -> Result<Polynomial> {
    let p = power_traces(phi, order)?;
    let coeffs = (0..=order)
        .map(|m| plemelj_smithies_alpha(&p, m) / factorial(m as u64))
        .collect();
    Ok(Polynomial::new(coeffs))
}

/// `exp(−Σ_{r<prec} μ^r/r · tr (−φ)^r)` in the variable `mu`.
pub fn log_det_series(phi: &FinitePotentOperator, prec: i64) -> Result<TruncatedLaurentSeries> {
    let count = (prec - 1).max(0) as usize;
    let p = power_traces(phi, count)?;
    let terms = p.iter().enumerate().map(|(k, pr)| {
        let r = k as i64 + 1;
        // −(−1)^r p_r / r
        let sign = if r % 2 == 1 { 1 } else { -1 };
        (r, pr * Rational::new(sign.into(), r.into()))
    });
    TruncatedLaurentSeries::new(MU, prec, terms).exp()
}

/// `det(1 − μ·core) · exp(Σ_{j<m} μ^j tr φ^j / j)`.
pub fn regularized_det_series(phi: &FinitePotentOperator, m: usize, prec: i64) -> Result<TruncatedLaurentSeries> {
    if m < 2 {
        return Err(Error::Precondition(format!("regularization order must be at least 2, got {m}")));
    }
    let dp = det_poly(phi)?;
    let reflected = dp.compose(&Polynomial::from_ints(&[0, -1]));
    let base = TruncatedLaurentSeries::from_polynomial(MU, &reflected, prec);
    let p = power_traces(phi, m - 1)?;
    let terms = p.iter().enumerate().map(|(k, pj)| {
        let j = k as i64 + 1;
        (j, pj * Rational::new(1.into(), j.into()))
    });
    let correction = TruncatedLaurentSeries::new(MU, prec, terms).exp()?;
    base.mul(&correction)
}

/// `Det(1 + φ)` by the requested route.
pub fn det_by_route(phi: &FinitePotentOperator, route: Route) -> Result<Rational> {
    match route {
        Route::Ast => det_one_plus(phi),
        Route::Exterior => {
            let e = elementary_symmetric(&lift_ast(phi)?.core_matrix);
            Ok(e.iter().skip(1).fold(Rational::one(), |acc, x| acc + x))
        }
        Route::Charpoly => {
            let m = phi.certify()?.m;
            let n = m.rows();
            let v = char_poly(&m).eval(&-Rational::one());
            Ok(if n % 2 == 0 { v } else { -v })
        }
        Route::PlemeljSmithies => {
            let n = phi.certify()?.w.len();
            let s = plemelj_smithies_series(phi, n)?;
            Ok(s.coeffs().iter().fold(Rational::zero(), |a, c| a + c))
        }
        Route::Logdet => {
            let n = phi.certify()?.w.len() as i64;
            let s = log_det_series(phi, n + 1)?;
            Ok(s.terms().fold(Rational::zero(), |a, (_, c)| a + c))
        }
    }
}

pub fn det_all_routes(phi: &FinitePotentOperator) -> Result<Vec<DetResult>> {
    Route::ALL
        .iter()
        .map(|&route| Ok(DetResult { value: det_by_route(phi, route)?, route }))
        .collect()
}

/// `ψ` with `(1 + φ)(1 + ψ) = 1`.
///
/// On the finite support the inverse is assembled in the Fitting basis:
/// `(1 + C)⁻¹ − 1` on the core and the terminating Neumann series
/// `Σ (−N)^i` on the nilpotent part. On the tail it is the truncated
/// series `Σ (−p(J))^i`.
pub fn invert_one_plus<F: Field>(phi: &FinitePotentOperator<F>) -> Result<FinitePotentOperator<F>> {
    let support: Vec<i64> = phi.finite_part().support().into_iter().collect();
    let m = phi.finite_part().restrict(&support);
    let d = crate::ast::fitting(&m);
    let r = d.core_dim();
    let n = support.len();
    let core_inv = Matrix::identity(r).add(&d.core_matrix).inverse().ok_or(Error::NotInvertible)?;
    let x_core = core_inv.sub(&Matrix::identity(r));
    let mut x_nil = Matrix::zeros(n - r, n - r);
    let minus_n = d.nil_matrix.neg();
    let mut power = Matrix::identity(n - r);
    for _ in 1..d.nil_degree.max(1) {
        power = power.mul(&minus_n);
        x_nil = x_nil.add(&power);
    }
    let x = Matrix::from_fn(n, n, |i, j| match (i < r, j < r) {
        (true, true) => x_core[(i, j)].clone(),
        (false, false) => x_nil[(i - r, j - r)].clone(),
        _ => F::zero(),
    });
    let p = d.basis();
    let psi_local = p.mul(&x).mul(&p.inverse().expect("Fitting basis is a basis"));
    let finite = SparseOperator::from_matrix(&support, &psi_local);

    let tail = phi.tail().map(|t| {
        let s = t.block_size();
        let minus_p: Vec<F> = t.polynomial().into_iter().map(|c| -c).collect();
        let mut acc = vec![F::zero(); s];
        let mut power = vec![F::one()];
        for _ in 1..s {
            power = JordanTail::poly_mul(&power, &minus_p, s);
            for (a, c) in acc.iter_mut().zip(&power) {
                *a = a.clone() + c.clone();
            }
        }
        JordanTail::from_polynomial(s, t.start(), acc)
    });
    Ok(FinitePotentOperator::new(finite, tail))
}

/// Replaces each entry of an operator over `K` by its regular
/// representation block, giving an operator over ℚ on indices
/// `i·d + a`, `0 ≤ a < d`. A tail must have rational coefficients; it then
/// becomes a tail in `J'^d` for the Jordan shift `J'` on blocks of size
/// `s·d`.
pub fn restrict_scalars(
    phi: &FinitePotentOperator<NumberFieldElement>,
    field: &Arc<NumberField>,
) -> Result<FinitePotentOperator<Rational>> {
    if det_one_plus(phi)?.is_zero() {
        return Err(Error::NotInvertible);
    }
    let d = field.degree();
    let di = d as i64;
    let mut entries = Vec::new();
    for (i, j, c) in phi.finite_part().entries() {
        let c = field.from_rational(Rational::one()) * c.clone();
        let reg = c.regular_matrix();
        for a in 0..d {
            for b in 0..d {
                entries.push((i * di + a as i64, j * di + b as i64, reg[(a, b)].clone()));
            }
        }
    }
    let tail = match phi.tail() {
        None => None,
        Some(t) => {
            let s = t.block_size();
            let mut coeffs = vec![Rational::zero(); s * d];
            for (k, c) in t.polynomial().iter().enumerate() {
                let q = c.as_rational().ok_or_else(|| {
                    Error::Precondition("restriction of scalars needs a tail with rational coefficients".into())
                })?;
                coeffs[k * d] = q;
            }
            Some(JordanTail::from_polynomial(s * d, t.start() * di, coeffs))
        }
    };
    Ok(FinitePotentOperator::new(SparseOperator::new(entries), tail))
}

/// `det(1 + φ)` on the span of the first `m` vectors of the basis that
/// lists the finite support first and then the tail blocks in order.
/// `m` must cover the support plus a whole number of tail blocks.
pub fn wedge_scaling_check<F: Field>(phi: &FinitePotentOperator<F>, m: usize) -> Result<F> {
    let support: Vec<i64> = phi.finite_part().support().into_iter().collect();
    if m < support.len() {
        return Err(Error::Precondition(format!("truncation {m} does not cover the support of size {}", support.len())));
    }
    let extra = m - support.len();
    let mut basis = support.clone();
    match phi.tail() {
        Some(t) => {
            if extra % t.block_size() != 0 {
                return Err(Error::Precondition(format!(
                    "truncation {m} is not aligned to tail blocks of size {}",
                    t.block_size()
                )));
            }
            basis.extend(t.start()..t.start() + extra as i64);
        }
        None => {
            let from = support.last().map_or(0, |x| x + 1);
            basis.extend(from..from + extra as i64);
        }
    }
    let pos: std::collections::BTreeMap<i64, usize> = basis.iter().enumerate().map(|(a, i)| (*i, a)).collect();
    let mut a = Matrix::<F>::identity(m);
    for (col, &j) in basis.iter().enumerate() {
        for (i, c) in phi.apply_basis(j) {
            let row = *pos
                .get(&i)
                .ok_or_else(|| Error::Precondition(format!("span of the first {m} basis vectors is not invariant")))?;
            a[(row, col)] = a[(row, col)].clone() + c;
        }
    }
    Ok(a.det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn op(e: &[(i64, i64, i64)]) -> FinitePotentOperator {
        SparseOperator::new(e.iter().map(|&(i, j, c)| (i, j, int(c)))).into()
    }

    fn tailed(e: &[(i64, i64, i64)], size: usize, start: i64) -> FinitePotentOperator {
        FinitePotentOperator::new(
            SparseOperator::new(e.iter().map(|&(i, j, c)| (i, j, int(c)))),
            Some(JordanTail::jordan(size, start)),
        )
    }

    #[test]
    fn traces() {
        assert_eq!(tate_trace(&op(&[(0, 1, 1)])).unwrap(), int(0));
        assert_eq!(tate_trace(&op(&[(0, 0, 2)])).unwrap(), int(2));
        assert_eq!(tate_trace(&op(&[(0, 0, 1), (0, 1, 1)])).unwrap(), int(1));
        assert_eq!(tate_trace(&tailed(&[(0, 0, 3)], 4, 5)).unwrap(), int(3));
    }

    #[test]
    fn determinants() {
        assert_eq!(det_one_plus(&op(&[(0, 1, 1)])).unwrap(), int(1));
        assert_eq!(det_one_plus(&op(&[(0, 0, 1)])).unwrap(), int(2));
        assert_eq!(det_one_plus(&op(&[(0, 0, 1), (0, 1, 1), (1, 1, 2)])).unwrap(), int(6));
        assert_eq!(det_one_plus(&tailed(&[], 3, 0)).unwrap(), int(1));
    }

    #[test]
    fn determinant_polynomials() {
        assert_eq!(det_poly(&op(&[(0, 0, 1)])).unwrap(), Polynomial::from_ints(&[1, 1]));
        assert_eq!(det_poly(&op(&[(0, 0, 1), (1, 1, 2)])).unwrap(), Polynomial::from_ints(&[1, 3, 2]));
        assert_eq!(det_poly(&op(&[(0, 1, 1)])).unwrap(), Polynomial::one());
    }

    #[test]
    fn exterior_traces() {
        let d = op(&[(0, 0, 1), (1, 1, 2)]);
        assert_eq!(exterior_trace(&d, 1).unwrap(), int(3));
        assert_eq!(exterior_trace(&d, 2).unwrap(), int(2));
        assert_eq!(exterior_trace(&d, 3).unwrap(), int(0));
        assert_eq!(exterior_trace(&op(&[(0, 1, 1)]), 1).unwrap(), int(0));
        assert_eq!(exterior_trace(&op(&[(0, 0, 1)]), 1).unwrap(), int(1));
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(char_poly(&Matrix::from_ints(&[&[2]])), Polynomial::from_ints(&[-2, 1]));
        assert_eq!(char_poly(&Matrix::from_ints(&[&[0, 1], &[0, 0]])), Polynomial::from_ints(&[0, 0, 1]));
        assert_eq!(char_poly(&Matrix::from_ints(&[&[1, 0], &[0, 2]])), Polynomial::from_ints(&[2, -3, 1]));
    }

    #[test]
    fn inverses() {
        let n = op(&[(0, 1, 1)]);
        assert_eq!(invert_one_plus(&n).unwrap(), n.neg());
        let p = op(&[(0, 0, 1)]);
        assert_eq!(invert_one_plus(&p).unwrap(), p.scale(&rat(-1, 2)));
        assert_eq!(invert_one_plus(&op(&[(0, 0, -1)])), Err(Error::NotInvertible));
        let t = tailed(&[(0, 0, 1), (1, 0, 1)], 3, 4);
        let psi = invert_one_plus(&t).unwrap();
        let prod = t.add(&psi).unwrap().add(&t.compose(&psi).unwrap()).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn plemelj_smithies() {
        assert_eq!(plemelj_smithies_series(&op(&[(0, 0, 1)]), 3).unwrap(), Polynomial::from_ints(&[1, 1]));
        assert_eq!(plemelj_smithies_series(&op(&[(0, 1, 1)]), 3).unwrap(), Polynomial::one());
        let d = op(&[(0, 0, 1), (1, 1, 2)]);
        assert_eq!(plemelj_smithies_series(&d, 4).unwrap(), Polynomial::from_ints(&[1, 3, 2]));
        assert_eq!(plemelj_smithies_alpha(&[int(3), int(5)], 2), int(4));
    }

    #[test]
    fn log_det() {
        assert_eq!(log_det_series(&op(&[(0, 1, 1)]), 5).unwrap(), TruncatedLaurentSeries::one(MU, 5));
        let p = log_det_series(&op(&[(0, 0, 1)]), 6).unwrap();
        assert_eq!(p, TruncatedLaurentSeries::new(MU, 6, [(0, int(1)), (1, int(1))]));
        let d = log_det_series(&op(&[(0, 0, 1), (1, 1, 2)]), 4).unwrap();
        assert_eq!(d, TruncatedLaurentSeries::new(MU, 4, [(0, int(1)), (1, int(3)), (2, int(2))]));
    }

    #[test]
    fn regularized() {
        let r = regularized_det_series(&op(&[(0, 1, 1)]), 3, 5).unwrap();
        assert_eq!(r, TruncatedLaurentSeries::one(MU, 5));
        // (1 − μ) e^μ = 1 − μ²/2 − μ³/3 − μ⁴/8
        let r = regularized_det_series(&op(&[(0, 0, 1)]), 2, 5).unwrap();
        let expect = TruncatedLaurentSeries::new(MU, 5, [(0, int(1)), (2, rat(-1, 2)), (3, rat(-1, 3)), (4, rat(-1, 8))]);
        assert_eq!(r, expect);
    }

    #[test]
    fn every_route_agrees_on_a_small_example() {
        let phi = tailed(&[(0, 0, 1), (0, 1, 2), (1, 0, -1), (1, 2, 1)], 2, 3);
        let results = det_all_routes(&phi).unwrap();
        for r in &results {
            assert_eq!(r.value, results[0].value, "{}", r.route);
        }
    }

    #[test]
    fn norms_under_restriction_of_scalars() {
        let k = NumberField::gaussian();
        let phi = FinitePotentOperator::from_sparse(SparseOperator::new([(0, 0, k.generator())]));
        let det_k = det_one_plus(&phi).unwrap();
        assert_eq!(det_k, k.from_rational(int(1)) + k.generator());
        let q = restrict_scalars(&phi, &k).unwrap();
        assert_eq!(det_one_plus(&q).unwrap(), int(2));

        let r = NumberField::sqrt2();
        let phi = FinitePotentOperator::from_sparse(SparseOperator::new([(0, 0, r.from_rational(int(2)))]));
        assert_eq!(det_one_plus(&restrict_scalars(&phi, &r).unwrap()).unwrap(), int(9));
        let zero = FinitePotentOperator::<NumberFieldElement>::zero();
        assert_eq!(det_one_plus(&restrict_scalars(&zero, &r).unwrap()).unwrap(), int(1));
    }

    #[test]
    fn wedge_truncations() {
        let t = tailed(&[], 3, 0);
        for m in [0, 3, 6] {
            assert_eq!(wedge_scaling_check(&t, m).unwrap(), int(1));
        }
        let d = tailed(&[(0, 0, 1), (1, 1, 2)], 3, 10);
        for k in 0..3 {
            assert_eq!(wedge_scaling_check(&d, 2 + 3 * k).unwrap(), int(6));
        }
        assert!(wedge_scaling_check(&d, 4).is_err());
    }
}
