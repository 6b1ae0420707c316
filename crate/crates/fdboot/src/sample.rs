//! Functional samples and their empirical covariance.

use std::sync::Arc;

use crate::error::{FdError, Result};
use crate::grid::{Curve, Grid};

/// `n` curves observed on a shared grid, stored row-major (`n x T`).
///
/// Immutable after construction; safe to share across parallel workers.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    grid: Arc<Grid>,
    values: Vec<f64>,
    n: usize,
}

impl FunctionalSample {
    /// Validates `rows` against the grid and assembles a sample.
    pub fn build(grid: Arc<Grid>, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(FdError::InsufficientSample { needed: 1, got: 0 });
        }
        let t_len = grid.len();
        let mut values = Vec::with_capacity(rows.len() * t_len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != t_len {
                return Err(FdError::DimensionMismatch {
                    row: i,
                    expected: t_len,
                    got: row.len(),
                });
            }
            if let Some(col) = row.iter().position(|v| !v.is_finite()) {
                return Err(FdError::NonFinite { row: i, col });
            }
            values.extend_from_slice(row);
        }
        Ok(FunctionalSample {
            grid,
            values,
            n: rows.len(),
        })
    }

    /// Assembles a sample from pre-validated row-major storage.
    pub(crate) fn from_raw(grid: Arc<Grid>, values: Vec<f64>, n: usize) -> Self {
        debug_assert_eq!(values.len(), n * grid.len());
        FunctionalSample { grid, values, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Row `i` as a slice of length `T`.
    pub fn row(&self, i: usize) -> &[f64] {
        let t_len = self.grid.len();
        &self.values[i * t_len..(i + 1) * t_len]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.grid.len())
    }

    /// Copies row `i` out as a standalone curve.
    pub fn curve(&self, i: usize) -> Curve {
        Curve::new(self.grid.clone(), self.row(i).to_vec())
            .expect("sample rows are validated at construction")
    }

    /// New sample whose row `k` is a copy of `self.row(indices[k])`.
    pub fn gather(&self, indices: &[usize]) -> FunctionalSample {
        let t_len = self.grid.len();
        let mut values = Vec::with_capacity(indices.len() * t_len);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        FunctionalSample {
            grid: self.grid.clone(),
            values,
            n: indices.len(),
        }
    }
}

/// Symmetric `T x T` covariance matrix of the discretized process.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    dim: usize,
    values: Vec<f64>,
}

impl CovMatrix {
    /// Wraps a row-major matrix, checking symmetry to 1e-12 relative tolerance.
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(FdError::DimensionMismatch {
                row: 0,
                expected: dim * dim,
                got: values.len(),
            });
        }
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for j in 0..dim {
            for k in (j + 1)..dim {
                let a = values[j * dim + k];
                let b = values[k * dim + j];
                if (a - b).abs() > 1e-12 * scale.max(1.0) {
                    return Err(FdError::InvalidParameter {
                        name: "covariance",
                        reason: format!("asymmetric at ({j},{k}): {a} vs {b}"),
                    });
                }
            }
        }
        Ok(CovMatrix { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.dim + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|j| self.entry(j, j)).collect()
    }
}

/// Pointwise sample mean vector of the rows (helper shared by statistics and
/// the covariance).
pub(crate) fn row_mean(sample: &FunctionalSample) -> Vec<f64> {
    let t_len = sample.grid().len();
    let mut acc = vec![0.0; t_len];
    for row in sample.rows() {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    let n = sample.n() as f64;
    for a in &mut acc {
        *a /= n;
    }
    acc
}

/// Unbiased empirical covariance of `[X(t_1), ..., X(t_T)]`.
///
/// Entry `(j,k)` is `1/(n-1) * sum_i [X_i(t_j) - mean(t_j)][X_i(t_k) - mean(t_k)]`.
/// The upper triangle is computed once and mirrored, so the result is
/// symmetric bitwise.
pub fn empirical_covariance(sample: &FunctionalSample) -> Result<CovMatrix> {
    let n = sample.n();
    if n < 2 {
        return Err(FdError::InsufficientSample { needed: 2, got: n });
    }
    let t_len = sample.grid().len();
    let mean = row_mean(sample);

    let centered: Vec<f64> = sample
        .rows()
        .flat_map(|row| row.iter().zip(&mean).map(|(v, m)| v - m))
        .collect();

    let dof = n as f64 - 1.0;
    let mut values = vec![0.0; t_len * t_len];
    for j in 0..t_len {
        for k in j..t_len {
            let mut acc = 0.0;
            for i in 0..n {
                acc += centered[i * t_len + j] * centered[i * t_len + k];
            }
            let v = acc / dof;
            values[j * t_len + k] = v;
            values[k * t_len + j] = v;
        }
    }
    Ok(CovMatrix { dim: t_len, values })
}
