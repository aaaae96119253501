//! Dense row-major matrices and the Cholesky solve behind the damped
//! normal equations.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape("matrix data", rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `A^T A`, accumulated row by row in a fixed order.
    pub fn gram(&self) -> Matrix<T> {
        let n = self.cols;
        let mut out = Matrix::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ri = row[i];
                if ri == T::zero() {
                    continue;
                }
                let out_row = &mut out.data[i * n..i * n + i + 1];
                for (o, &rj) in out_row.iter_mut().zip(&row[..=i]) {
                    *o += ri * rj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.data[j * n + i] = out.data[i * n + j];
            }
        }
        out
    }

    /// `A^T v`.
    pub fn transpose_mul(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::shape("transpose product", self.rows, v.len()));
        }
        let mut out = vec![T::zero(); self.cols];
        for (r, &vr) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o += a * vr;
            }
        }
        Ok(out)
    }
}

/// Solves `(A + shift I) x = b` for symmetric positive-definite `A + shift I`
/// via an in-place Cholesky factorization.
#[allow(clippy::needless_range_loop)] // triangular index arithmetic reads clearer
pub fn cholesky_solve_shifted<T: Scalar>(a: &Matrix<T>, shift: T, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::shape("square system", n, a.cols()));
    }
    if b.len() != n {
        return Err(Error::shape("right-hand side", n, b.len()));
    }
    let mut l = a.clone();
    for i in 0..n {
        let v = l.get(i, i) + shift;
        l.set(i, i, v);
    }
    for j in 0..n {
        let mut diag = l.get(j, j);
        for k in 0..j {
            let ljk = l.get(j, k);
            diag -= ljk * ljk;
        }
        if !(diag > T::zero()) || !diag.is_finite() {
            return Err(Error::Numerical {
                stage: "cholesky",
                layer: None,
                detail: format!("non-positive pivot {diag} at column {j}"),
            });
        }
        let pivot = diag.sqrt();
        l.set(j, j, pivot);
        for i in j + 1..n {
            let mut s = l.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / pivot);
        }
    }
    // L y = b
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    // L^T x = y
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l.get(k, i) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    Ok(y)
}
