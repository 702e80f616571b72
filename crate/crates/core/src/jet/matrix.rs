use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::smooth::Scalar;

/// Pivots with magnitude below this are treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Dense row-major matrix over any [`Scalar`].
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Matrix over the jet ring.
pub type Jet2Matrix = Matrix<Jet2>;

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::ArityMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Square matrix from a flat row-major slice.
    pub fn square(data: &[S]) -> Result<Self> {
        let n = (data.len() as f64).sqrt().round() as usize;
        if n * n != data.len() {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Self::new(n, n, data.to_vec())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
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

    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ArityMismatch { expected: self.cols, got: other.rows });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k) * other.get(k, j);
            }
            acc
        }))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).scale(k))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn value_part(&self) -> Matrix<f64> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).value())
    }

    /// Inverse over the scalar's own ring; jets use the nilpotent expansion.
    pub fn inverse(&self) -> Result<Self> {
        S::invert_matrix(self)
    }

    /// Gauss–Jordan elimination with partial pivoting on value parts.
    ///
    /// Valid over any local ring whose units are exactly the elements with
    /// nonzero value part.
    pub fn gauss_jordan_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::InvalidParameter("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a.get(r, col).value().abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag < PIVOT_THRESHOLD {
                return Err(Error::SingularValuePart { pivot: pivot_mag });
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let p = a.get(col, col).recip()?;
            for j in 0..n {
                a.set(col, j, a.get(col, j) * p);
                inv.set(col, j, inv.get(col, j) * p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == S::zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - factor * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Matrix<f64> {
    pub fn lift<S: Scalar>(&self) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| S::from_f64(self.get(i, j)))
    }

    pub fn det(&self) -> f64 {
        if !self.is_square() {
            return 0.0;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&x, &y| a.get(x, col).abs().total_cmp(&a.get(y, col).abs()))
                .unwrap_or(col);
            let p = a.get(pivot_row, col);
            if p == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let factor = a.get(r, col) / p;
                for j in col..n {
                    a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Matrix<Jet2> {
    /// `(V + N)⁻¹ = V⁻¹(I − NV⁻¹ + (NV⁻¹)²)` with `V` the value part and `N`
    /// the nilpotent part; the series terminates because `(NV⁻¹)³ = 0`.
    pub fn invert_nilpotent(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::InvalidParameter("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let v_inv: Matrix<Jet2> = self.value_part().gauss_jordan_inverse()?.lift();
        let nil = Matrix::from_fn(n, n, |i, j| self.get(i, j).nilpotent());
        let m = nil.matmul(&v_inv)?;
        let series = Self::identity(n).sub(&m).add(&m.matmul(&m)?);
        v_inv.matmul(&series)
    }
}
