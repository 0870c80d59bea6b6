//! Fitting decomposition of a finite invariant core: `V = W ⊕ U` with the
//! operator invertible on `W` and nilpotent on `U`.

use crate::arith::{Field, Matrix};
use crate::error::Result;
use crate::operator::FinitePotentOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct AstDecomposition<F> {
    /// Basis indices of the ambient finite space. For [`fitting`] these are
    /// `0..n`; for [`lift_ast`] they are the certificate indices.
    pub indices: Vec<i64>,
    /// Columns spanning `W = im M^n`.
    pub core_basis: Vec<Vec<F>>,
    /// Columns spanning `U = ker M^n`.
    pub nil_basis: Vec<Vec<F>>,
    /// `M|_W` in `core_basis`; invertible.
    pub core_matrix: Matrix<F>,
    /// `M|_U` in `nil_basis`; nilpotent.
    pub nil_matrix: Matrix<F>,
    /// Smallest `k` with `nil_matrix^k = 0` (0 when `U = 0`).
    pub nil_degree: usize,
}

impl<F: Field> AstDecomposition<F> {
    /// The basis change `[core_basis | nil_basis]`.
    pub fn basis(&self) -> Matrix<F> {
        let n = self.indices.len();
        let cols: Vec<Vec<F>> = self.core_basis.iter().chain(&self.nil_basis).cloned().collect();
        Matrix::from_columns(n, &cols)
    }

    pub fn core_dim(&self) -> usize {
        self.core_basis.len()
    }
}

/// Splits a square matrix as `im Mⁿ ⊕ ker Mⁿ`, `n` its size.
pub fn fitting<F: Field>(m: &Matrix<F>) -> AstDecomposition<F> {
    assert!(m.is_square(), "fitting needs a square matrix");
    let n = m.rows();
    let mn = m.pow(n);
    let core_basis = mn.column_space();
    let nil_basis = mn.kernel();
    debug_assert_eq!(core_basis.len() + nil_basis.len(), n);
    let r = core_basis.len();
    let cols: Vec<Vec<F>> = core_basis.iter().chain(&nil_basis).cloned().collect();
    let p = Matrix::from_columns(n, &cols);
    let block = p.inverse().expect("image and kernel of M^n are complementary").mul(m).mul(&p);
    let core: Vec<usize> = (0..r).collect();
    let nil: Vec<usize> = (r..n).collect();
    let core_matrix = block.submatrix(&core, &core);
    let nil_matrix = block.submatrix(&nil, &nil);
    debug_assert!(block.submatrix(&core, &nil).is_zero() && block.submatrix(&nil, &core).is_zero());
    let mut nil_degree = 0;
    if !nil.is_empty() {
        let mut power = nil_matrix.clone();
        nil_degree = 1;
        while !power.is_zero() {
            power = power.mul(&nil_matrix);
            nil_degree += 1;
        }
    }
    AstDecomposition {
        indices: (0..n as i64).collect(),
        core_basis,
        nil_basis,
        core_matrix,
        nil_matrix,
        nil_degree,
    }
}

/// Fitting decomposition of the certificate matrix of `φ`. The tail is
/// nilpotent, so the global invertible core is this core.
pub fn lift_ast<F: Field>(phi: &FinitePotentOperator<F>) -> Result<AstDecomposition<F>> {
    let cert = phi.certify()?;
    let mut d = fitting(&cert.m);
    d.indices = cert.w;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Rational};
    use crate::operator::{JordanTail, SparseOperator};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_ints(rows)
    }

    #[test]
    fn nilpotent_matrix() {
        let d = fitting(&m(&[&[0, 1], &[0, 0]]));
        assert_eq!(d.core_dim(), 0);
        assert_eq!(d.nil_basis.len(), 2);
        assert_eq!(d.nil_degree, 2);
    }

    #[test]
    fn diagonal_matrix() {
        let d = fitting(&m(&[&[2, 0], &[0, 0]]));
        assert_eq!(d.core_matrix, m(&[&[2]]));
        assert_eq!(d.core_basis.len(), 1);
        assert_eq!(d.core_basis[0][1], int(0));
        assert_eq!(d.nil_basis, vec![vec![int(0), int(1)]]);
        assert_eq!(d.nil_degree, 1);
    }

    #[test]
    fn idempotent_matrix() {
        let d = fitting(&m(&[&[1, 1], &[0, 0]]));
        assert_eq!(d.core_matrix, m(&[&[1]]));
        assert_eq!(d.core_basis.len(), 1);
        assert_eq!(d.core_basis[0][1], int(0));
        let u = &d.nil_basis[0];
        assert_eq!(u[0].clone() + u[1].clone(), int(0));
    }

    #[test]
    fn lifted_cores() {
        let p: FinitePotentOperator = SparseOperator::new([(0, 0, int(1))]).into();
        assert_eq!(lift_ast(&p).unwrap().core_matrix, m(&[&[1]]));
        let t = FinitePotentOperator::<Rational>::new(SparseOperator::zero(), Some(JordanTail::jordan(3, 0)));
        assert_eq!(lift_ast(&t).unwrap().core_dim(), 0);
        let q: FinitePotentOperator = SparseOperator::new([(0, 0, int(1)), (0, 1, int(1))]).into();
        let d = lift_ast(&q).unwrap();
        assert_eq!(d.core_matrix, m(&[&[1]]));
        assert_eq!(d.indices, vec![0]);
    }
}
