//! Evaluation grids and single curves.
//!
//! Curves are stored discretized on a shared grid of strictly increasing
//! points; every statistic, distance and resampler in this crate operates on
//! that representation. Grids are reference-counted so that samples, curves
//! and bootstrap output can share one allocation and grid identity checks
//! stay cheap.

use std::sync::Arc;

use crate::error::{FdError, Result};

/// Ordered evaluation points `t_1 < ... < t_T` within `[0, tau]`.
///
/// The last point plays the role of `tau`; integrals run over `[t_1, t_T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// Validates and wraps a set of evaluation points.
    pub fn new(points: Vec<f64>) -> Result<Arc<Self>> {
        if points.len() < 2 {
            return Err(FdError::InvalidGrid {
                reason: format!("need at least 2 points, got {}", points.len()),
            });
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(FdError::InvalidGrid {
                reason: format!("non-finite point {p}"),
            });
        }
        if points[0] < 0.0 {
            return Err(FdError::InvalidGrid {
                reason: format!("first point {} is negative", points[0]),
            });
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(FdError::InvalidGrid {
                reason: format!("points not strictly increasing at {} >= {}", w[0], w[1]),
            });
        }
        Ok(Arc::new(Grid { points }))
    }

    /// `len` equally spaced points spanning `[0, 1]`.
    pub fn unit_interval(len: usize) -> Result<Arc<Self>> {
        if len < 2 {
            return Err(FdError::InvalidGrid {
                reason: format!("need at least 2 points, got {len}"),
            });
        }
        let step = (len - 1) as f64;
        Grid::new((0..len).map(|j| j as f64 / step).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Width of the observation interval, `t_T - t_1`.
    pub fn span(&self) -> f64 {
        self.points[self.points.len() - 1] - self.points[0]
    }

    /// Trapezoidal quadrature of `values` over the grid.
    ///
    /// Accumulates `(v_j + v_{j+1}) / 2 * (t_{j+1} - t_j)` left to right; this
    /// exact operation order is part of the crate's reproducibility contract.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.points.len());
        let mut acc = 0.0;
        for j in 0..self.points.len() - 1 {
            acc += (values[j] + values[j + 1]) * 0.5 * (self.points[j + 1] - self.points[j]);
        }
        acc
    }
}

/// Returns true when two grids are interchangeable (same allocation or equal
/// point sets).
pub fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> bool {
    Arc::ptr_eq(a, b) || a.points == b.points
}

/// One function evaluated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Curve {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FdError::DimensionMismatch {
                row: 0,
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(FdError::NonFinite { row: 0, col });
        }
        Ok(Curve { grid, values })
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Curve::new(grid, values)
    }

    pub fn constant(grid: Arc<Grid>, value: f64) -> Result<Self> {
        let len = grid.len();
        Curve::new(grid, vec![value; len])
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
