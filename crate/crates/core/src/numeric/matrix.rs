use std::fmt;

use crate::error::{EvalError, EvalResult};

use super::scalar::{sum, Scalar};

/// Condition estimates above this are treated as singular.
pub const COND_LIMIT: f64 = 1e12;

/// Small dense row-major matrix over any scalar.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

pub type DenseMatrix = Matrix<f64>;

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &rows).finish()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<S> = rows.into_iter().flatten().collect();
        Self::from_vec(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn at(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Leading values.
    pub fn re(&self) -> DenseMatrix {
        self.map(|v| v.re())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matmul shapes");
        Self::from_fn(self.rows, o.cols, |i, j| sum((0..self.cols).map(|k| self.at(i, k) * o.at(k, j))))
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matvec shapes");
        (0..self.rows).map(|i| sum((0..self.cols).map(|k| self.at(i, k) * v[k].clone()))).collect()
    }

    /// Inverse by Gauss-Jordan elimination, pivoting on leading values.
    ///
    /// Fails with `SingularMatrix` when the 1-norm condition estimate of the
    /// leading-value matrix exceeds [`COND_LIMIT`].
    pub fn invert(&self) -> EvalResult<Self> {
        if self.rows != self.cols {
            return Err(EvalError::Dimension(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&r1, &r2| a[r1 * n + col].re().abs().total_cmp(&a[r2 * n + col].re().abs()))
                .expect("nonempty pivot range");
            if a[piv * n + col].re() == 0.0 {
                return Err(EvalError::SingularMatrix { cond: f64::INFINITY });
            }
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                    inv.swap(piv * n + k, col * n + k);
                }
            }
            let d = a[col * n + col].recip();
            for k in 0..n {
                a[col * n + k] = a[col * n + k].clone() * d.clone();
                inv[col * n + k] = inv[col * n + k].clone() * d.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col].clone();
                if f.re() == 0.0 && S::ORDER == 0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] = a[r * n + k].clone() - f.clone() * a[col * n + k].clone();
                    inv[r * n + k] = inv[r * n + k].clone() - f.clone() * inv[col * n + k].clone();
                }
            }
        }
        let inv = Matrix { rows: n, cols: n, data: inv };
        let cond = self.re().norm1() * inv.re().norm1();
        if !(cond <= COND_LIMIT) {
            return Err(EvalError::SingularMatrix { cond });
        }
        Ok(inv)
    }

    /// Solves `self · z = b`.
    pub fn solve(&self, b: &[S]) -> EvalResult<Vec<S>> {
        Ok(self.invert()?.matvec(b))
    }
}

impl DenseMatrix {
    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `‖M‖₁‖M⁻¹‖₁`, or infinity when `M` cannot be inverted.
    pub fn cond1(&self) -> f64 {
        match self.invert() {
            Ok(inv) => self.norm1() * inv.norm1(),
            Err(EvalError::SingularMatrix { cond }) => cond,
            Err(_) => f64::INFINITY,
        }
    }
}
