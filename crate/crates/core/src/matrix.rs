//! Dense storage: the symmetric carrier [`SymMatrix`] and a small general
//! rectangular [`Mat`] used for eigenvector and basis blocks.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::MAX_ORDER;

/// Relative symmetry deviation accepted when ingesting a matrix.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-8;

/// Dense real symmetric matrix of order `n`, stored row-major.
///
/// Construction validates finiteness and symmetry; the stored entries are the
/// symmetrized average so that `get(i, j) == get(j, i)` holds bit-for-bit.
#[derive(Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > MAX_ORDER {
        return Err(Error::TooLarge(n));
    }
    Ok(())
}

impl<T: Real> SymMatrix<T> {
    /// Builds a matrix from rows, rejecting asymmetry beyond
    /// [`DEFAULT_SYMMETRY_TOL`] relative to the largest entry.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows_with_tol(rows, T::lit(DEFAULT_SYMMETRY_TOL))
    }

    /// Builds a matrix from rows with an explicit relative symmetry tolerance.
    pub fn from_rows_with_tol<R: AsRef<[T]>>(rows: &[R], rel_tol: T) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
            data.extend_from_slice(row);
        }
        Self::from_raw(n, data, rel_tol)
    }

    /// Builds a matrix from a flat row-major buffer.
    pub fn from_row_major(n: usize, data: Vec<T>, rel_tol: T) -> Result<Self> {
        check_order(n)?;
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Self::from_raw(n, data, rel_tol)
    }

    fn from_raw(n: usize, mut data: Vec<T>, rel_tol: T) -> Result<Self> {
        let scale = data.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let allowed = rel_tol * scale;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                let deviation = (a - b).abs();
                if deviation > allowed {
                    return Err(Error::Asymmetric {
                        row: i,
                        col: j,
                        deviation: deviation.to_f64().unwrap_or(f64::NAN),
                    });
                }
                let avg = if a == b { a } else { a + (b - a) / T::lit(2.0) };
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix by evaluating `f(i, j)` on the upper triangle
    /// (`i <= j`) and mirroring.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        check_order(n)?;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data[i * n + j] = x;
                data[j * n + i] = x;
            }
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { T::zero() })
    }

    /// `scale · x xᵀ`.
    pub fn outer(x: &[T], scale: T) -> Result<Self> {
        Self::from_fn(x.len(), |i, j| scale * x[i] * x[j])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_row_major(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n, "vector length must equal matrix order");
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[T]) -> T {
        dot(x, &self.mul_vec(x))
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).iter().copied().sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn norm_frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "matrix orders must match");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| c * x).collect(),
        }
    }

    /// Congruence `Qᵀ A Q` for an `n × k` block `Q`.
    pub fn congruence(&self, q: &Mat<T>) -> Self {
        assert_eq!(q.rows(), self.n, "basis rows must equal matrix order");
        let k = q.cols();
        let aq = self.to_mat().matmul(q);
        let mut data = vec![T::zero(); k * k];
        for i in 0..k {
            for j in i..k {
                let x: T = (0..self.n).map(|r| q.get(r, i) * aq.get(r, j)).sum();
                data[i * k + j] = x;
                data[j * k + i] = x;
            }
        }
        // k == 0 only arises for the zero matrix restricted to an empty
        // complement; callers guard against that.
        Self { n: k, data }
    }

    pub fn to_mat(&self) -> Mat<T> {
        Mat {
            rows: self.n,
            cols: self.n,
            data: self.data.clone(),
        }
    }

    /// Symmetrizes a general square block, averaging mirrored entries.
    pub fn symmetrize(m: &Mat<T>) -> Self {
        assert_eq!(m.rows(), m.cols(), "symmetrize needs a square block");
        let n = m.rows();
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let x = (m.get(i, j) + m.get(j, i)) / T::lit(2.0);
                data[i * n + j] = x;
                data[j * n + i] = x;
            }
        }
        Self { n, data }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.n, other.n, "matrix orders must match");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self { n: self.n, data }
    }
}

impl<T: fmt::Debug> fmt::Debug for SymMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({})[", self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.data[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "]")
    }
}

impl<T: Real> Add for &SymMatrix<T> {
    type Output = SymMatrix<T>;
    fn add(self, rhs: Self) -> SymMatrix<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &SymMatrix<T> {
    type Output = SymMatrix<T>;
    fn sub(self, rhs: Self) -> SymMatrix<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Real> Mul<&SymMatrix<T>> for f64 {
    type Output = SymMatrix<T>;
    fn mul(self, rhs: &SymMatrix<T>) -> SymMatrix<T> {
        rhs.scaled(T::lit(self))
    }
}

/// Row-major general dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds an `rows × columns.len()` block from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length must equal row count");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<T>> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx] + a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], x))
            .collect()
    }

    /// Largest entrywise deviation of `selfᵀ self` from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let g = self.transpose().matmul(self);
        let mut worst = T::zero();
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((g.get(i, j) - target).abs());
            }
        }
        worst
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat({}x{})[", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_within_tolerance() {
        let m = SymMatrix::from_rows(&[[1.0, 2.0], [2.0 + 1e-12, 3.0]]).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn averaging_keeps_extreme_entries() {
        let m = SymMatrix::from_rows(&[[f64::MAX, 5e-324], [5e-324, f64::MAX]]).unwrap();
        assert_eq!(m.get(0, 0), f64::MAX);
        assert_eq!(m.get(0, 1), 5e-324);
    }

    #[test]
    fn rejects_asymmetry_and_names_pair() {
        let err =
            SymMatrix::from_rows(&[[1.0, 2.0, 0.0], [2.0, 1.0, 0.5], [0.0, 0.4, 1.0]]).unwrap_err();
        match err {
            Error::Asymmetric { row, col, .. } => assert_eq!((row, col), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(
            SymMatrix::from_rows(&[[1.0, f64::NAN], [f64::NAN, 1.0]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        let empty: &[Vec<f64>] = &[];
        assert_eq!(SymMatrix::from_rows(empty).unwrap_err(), Error::EmptyMatrix);
        assert!(matches!(
            SymMatrix::<f64>::from_rows(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
    }

    #[test]
    fn order_cap() {
        assert_eq!(
            SymMatrix::<f32>::zeros(MAX_ORDER + 1).unwrap_err(),
            Error::TooLarge(MAX_ORDER + 1)
        );
    }

    #[test]
    fn norms_and_congruence() {
        let a =
            SymMatrix::from_rows(&[[2.0, -1.0, -1.0], [-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]]).unwrap();
        assert_eq!(a.norm_inf(), 4.0);
        assert_eq!(a.norm_max(), 2.0);
        assert_eq!(a.row_sums(), vec![0.0, 0.0, 0.0]);
        let q = Mat::identity(3).select_columns(&[0, 2]);
        let r = a.congruence(&q);
        assert_eq!(r.to_rows(), vec![vec![2.0, -1.0], vec![-1.0, 1.0]]);
        assert_eq!(a.quad_form(&[1.0, 1.0, 1.0]), 0.0);
    }
}
