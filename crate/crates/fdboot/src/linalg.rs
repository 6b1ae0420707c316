//! Sampling factor for mean-zero Gaussian vectors with a given covariance.
//!
//! Empirical covariance matrices here have rank at most `n - 1 < T`, so a
//! Cholesky factorization would fail; instead we use a symmetric
//! eigendecomposition and clamp small negative eigenvalues (numerical dust)
//! to zero.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{FdError, Result};

/// Relative tolerance for negative eigenvalues before factorization fails.
const EIG_TOL: f64 = 1e-8;

/// Factor `L` with `L L^T` equal to the covariance (up to clamped dust), used
/// to turn i.i.d. standard normals into correlated draws.
#[derive(Debug, Clone)]
pub(crate) struct GaussianFactor {
    l: DMatrix<f64>,
    dim: usize,
}

impl GaussianFactor {
    /// Factorizes a symmetric row-major `dim x dim` covariance.
    pub fn new(dim: usize, row_major: &[f64]) -> Result<Self> {
        let m = DMatrix::from_row_slice(dim, dim, row_major);
        let eig = m.symmetric_eigen();
        let max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
        let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if min < -(EIG_TOL * max.max(1.0)) {
            return Err(FdError::Factorization {
                min_eigenvalue: min,
            });
        }
        let mut l = eig.eigenvectors;
        for (k, mut col) in l.column_iter_mut().enumerate() {
            let lambda = eig.eigenvalues[k].max(0.0);
            col *= lambda.sqrt();
        }
        Ok(GaussianFactor { l, dim })
    }

    /// Draws `z ~ N(0, I)` from `rng` and accumulates `scale * L z` into
    /// `out`. `scratch` must have length `dim`.
    pub fn add_sample_into<R: Rng>(
        &self,
        rng: &mut R,
        scale: f64,
        out: &mut [f64],
        scratch: &mut [f64],
    ) {
        debug_assert_eq!(out.len(), self.dim);
        debug_assert_eq!(scratch.len(), self.dim);
        for z in scratch.iter_mut() {
            *z = rng.sample(StandardNormal);
        }
        // Column-major accumulation matches nalgebra's storage layout.
        for (k, z) in scratch.iter().enumerate() {
            let zk = scale * z;
            if zk == 0.0 {
                continue;
            }
            let col = self.l.column(k);
            for (o, l) in out.iter_mut().zip(col.iter()) {
                *o += l * zk;
            }
        }
    }
}
