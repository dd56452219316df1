//! Small dense linear algebra for `(2n+1)`-sized tangent-space objects.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::real::Real;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Panics if `data.len() != dim²`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data length");
        SquareMatrix { dim, data }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// `u vᵀ`.
    pub fn outer(u: &[f64], v: &[f64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn mul(&self, rhs: &SquareMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.mul_vec(y)).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, rhs: &SquareMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        SquareMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, rhs: &SquareMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        SquareMatrix { dim: self.dim, data }
    }

    pub fn scaled(&self, k: f64) -> Self {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn max_abs_diff(&self, rhs: &SquareMatrix) -> f64 {
        self.sub(rhs).max_abs()
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    /// Gauss-Jordan with partial pivoting; `None` when a pivot underflows
    /// `1e-300` or the result is non-finite.
    pub fn inverse(&self) -> Option<SquareMatrix> {
        invert_generic(&self.data, self.dim).map(|data| SquareMatrix { dim: self.dim, data })
    }

    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs())).unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in col + 1..n {
                let factor = a[r * n + col] / d;
                for k in col..n {
                    a[r * n + k] -= factor * a[col * n + k];
                }
            }
        }
        det
    }

    /// Eigenvalues of the symmetric part, via cyclic Jacobi rotations.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = Self::from_fn(n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]));
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            if off < 1e-30 * (1.0 + a.max_abs() * a.max_abs()) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[(i, i)]).collect()
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Rank of a row-major `rows×cols` matrix by Gaussian elimination, with
/// pivots below `tol·max|a|` treated as zero.
pub fn rank(data: &[f64], rows: usize, cols: usize, tol: f64) -> usize {
    let mut a = data.to_vec();
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).max_by(|&r, &s| a[r * cols + col].abs().total_cmp(&a[s * cols + col].abs())).unwrap();
        if a[pivot * cols + col].abs() <= tol * scale {
            continue;
        }
        for k in 0..cols {
            a.swap(rank * cols + k, pivot * cols + k);
        }
        for r in rank + 1..rows {
            let factor = a[r * cols + col] / a[rank * cols + col];
            for k in col..cols {
                a[r * cols + k] -= factor * a[rank * cols + k];
            }
        }
        rank += 1;
    }
    rank
}

/// Inverse of a row-major `n×n` matrix over any [`Real`] scalar. Pivoting
/// uses the primal values only.
pub fn invert_generic<T: Real>(data: &[T], n: usize) -> Option<Vec<T>> {
    let mut a = data.to_vec();
    let mut inv: Vec<T> = (0..n * n).map(|idx| if idx / n == idx % n { T::one() } else { T::zero() }).collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r * n + col].value().abs().total_cmp(&a[s * n + col].value().abs()))?;
        if a[pivot * n + col].value().abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
                inv.swap(col * n + k, pivot * n + k);
            }
        }
        let d = a[col * n + col];
        for k in 0..n {
            a[col * n + k] = a[col * n + k] / d;
            inv[col * n + k] = inv[col * n + k] / d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * n + col];
            // exact comparison covers every dual part
            if factor == T::zero() {
                continue;
            }
            for k in 0..n {
                a[r * n + k] = a[r * n + k] - factor * a[col * n + k];
                inv[r * n + k] = inv[r * n + k] - factor * inv[col * n + k];
            }
        }
    }
    if inv.iter().all(|v| v.all_finite()) {
        Some(inv)
    } else {
        None
    }
}
