//! Dense exact matrices.
//!
//! Elimination is fraction-free (Bareiss): every intermediate entry is a
//! minor of the input, so rational growth stays polynomial.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::{Field, Rational, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, cols: &[Vec<R>]) -> Self {
        Self::from_fn(n_rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> R {
        assert!(self.is_square());
        (0..self.rows).fold(R::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(q)).collect() }
    }

    pub fn scale_by(&self, c: &R) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Characteristic polynomial det(x·I − M) by Faddeev–LeVerrier,
    /// lowest coefficient first (monic, length n + 1). Only divides by the
    /// integers 1..n, so it works over any ℚ-algebra.
    pub fn charpoly_coeffs(&self) -> Vec<R> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![R::zero(); n + 1];
        c[n] = R::one();
        let mut m_k = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I
            m_k = self.mul(&m_k);
            for i in 0..n {
                m_k[(i, i)] = m_k[(i, i)].clone() + c[n - k + 1].clone();
            }
            let tr = self.mul(&m_k).trace();
            c[n - k] = -tr.scale(&super::rat(1, k as i64));
        }
        c
    }

    /// Power sums p_j = tr(M^j) for j = 1..=count.
    pub fn power_traces(&self, count: usize) -> Vec<R> {
        let mut out = Vec::with_capacity(count);
        let mut p = Self::identity(self.rows);
        for _ in 0..count {
            p = p.mul(self);
            out.push(p.trace());
        }
        out
    }
}

impl<F: Field> Matrix<F> {
    /// Determinant by fraction-free Bareiss elimination with row pivoting.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = F::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return F::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = !sign;
            }
            let pivot = a[(k, k)].clone();
            let prev_inv = prev.inv().expect("Bareiss pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = pivot.clone() * a[(i, j)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v * prev_inv.clone();
                }
                a[(i, k)] = F::zero();
            }
            prev = pivot;
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and pivot columns. The forward pass is
    /// fraction-free; rows are normalized only at the end.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut prev = F::one();
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let pivot = a[(r, c)].clone();
            let prev_inv = prev.inv().expect("nonzero pivot");
            for i in r + 1..self.rows {
                let f = a[(i, c)].clone();
                for j in c..self.cols {
                    let v = pivot.clone() * a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                    a[(i, j)] = v * prev_inv.clone();
                }
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        // back substitution with normalized pivot rows
        for (ri, &c) in pivots.iter().enumerate().rev() {
            let inv = a[(ri, c)].inv().expect("nonzero pivot");
            for j in 0..self.cols {
                a[(ri, j)] = a[(ri, j)].clone() * inv.clone();
            }
            for i in 0..ri {
                let f = a[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(ri, j)].clone();
                }
            }
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space {v : M v = 0}.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (ri, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(ri, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Basis of the column space: the pivot columns of the matrix itself.
    pub fn column_space(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solves `M X = B` for a square invertible `M`.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        self.inverse().map(|inv| inv.mul(rhs))
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Matrix<Rational> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| super::int(x)).collect()).collect())
    }
}
