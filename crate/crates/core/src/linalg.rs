//! Dense least squares by Householder QR.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

#[derive(Clone, Debug)]
pub(crate) struct LeastSquares {
    pub coef: Vec<f64>,
    /// `‖A x - b‖²`.
    pub residual: f64,
    /// `(AᵀA)⁻¹`, row-major `cols × cols`.
    pub cov: Vec<f64>,
}

/// Minimizes `‖A x - b‖` for full-column-rank `A` with `rows >= cols`.
/// Columns are equilibrated first; a pivot below `1e-12` of the largest
/// counts as rank deficiency.
pub(crate) fn least_squares(a: &Dense, b: &[f64]) -> Result<LeastSquares> {
    let (m, n) = (a.rows, a.cols);
    if m < n || b.len() != m {
        return Err(Error::SingularSystem);
    }
    let mut r = a.clone();
    let mut scale = vec![1.0; n];
    for (c, s) in scale.iter_mut().enumerate() {
        let norm = math::sqrt((0..m).map(|i| r.at(i, c) * r.at(i, c)).sum());
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::SingularSystem);
        }
        *s = norm;
        for i in 0..m {
            *r.at_mut(i, c) /= norm;
        }
    }
    let mut y = b.to_vec();
    let mut diag = vec![0.0; n];
    for k in 0..n {
        let alpha = math::sqrt((k..m).map(|i| r.at(i, k) * r.at(i, k)).sum());
        let alpha = if r.at(k, k) > 0.0 { -alpha } else { alpha };
        diag[k] = alpha;
        // v = x - alpha e1, stored in column k below the diagonal
        *r.at_mut(k, k) -= alpha;
        let vnorm2: f64 = (k..m).map(|i| r.at(i, k) * r.at(i, k)).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in k + 1..n {
            let dot: f64 = (k..m).map(|i| r.at(i, k) * r.at(i, c)).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                let v = r.at(i, k);
                *r.at_mut(i, c) -= f * v;
            }
        }
        let dot: f64 = (k..m).map(|i| r.at(i, k) * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            y[i] -= f * r.at(i, k);
        }
    }
    let largest = diag.iter().fold(0.0f64, |acc, d| acc.max(math::abs(*d)));
    if diag.iter().any(|d| math::abs(*d) <= 1e-12 * largest) {
        return Err(Error::SingularSystem);
    }
    let upper = |i: usize, j: usize| if i == j { diag[i] } else { r.at(i, j) };

    let mut z = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| upper(i, j) * z[j]).sum();
        z[i] = (y[i] - s) / diag[i];
    }
    let residual: f64 = y[n..].iter().map(|v| v * v).sum();

    // R⁻¹ by back substitution, then cov = R⁻¹ R⁻ᵀ in scaled coordinates.
    let mut rinv = vec![0.0; n * n];
    for c in 0..n {
        for i in (0..=c).rev() {
            let rhs = if i == c { 1.0 } else { 0.0 };
            let s: f64 = (i + 1..=c).map(|j| upper(i, j) * rinv[j * n + c]).sum();
            rinv[i * n + c] = (rhs - s) / diag[i];
        }
    }
    let mut cov = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (i.max(j)..n)
                .map(|t| rinv[i * n + t] * rinv[j * n + t])
                .sum();
            cov[i * n + j] = s / (scale[i] * scale[j]);
        }
    }
    let coef = z.iter().zip(&scale).map(|(v, s)| v / s).collect();
    Ok(LeastSquares {
        coef,
        residual,
        cov,
    })
}
