//! Distance functionals between curves.
//!
//! These are the distances used for bootstrap cut-offs and coverage checks:
//! the L2 norm of the difference (trapezoidal quadrature over the grid) and
//! the sup norm evaluated at the grid points.

use std::str::FromStr;

use crate::error::{FdError, Result};
use crate::grid::{same_grid, Curve};

/// Which distance functional to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    L2,
    LInf,
}

impl MetricKind {
    pub fn label(&self) -> &'static str {
        match self {
            MetricKind::L2 => "l2",
            MetricKind::LInf => "linf",
        }
    }

    /// Distance between two curves under this metric.
    pub fn distance(&self, f: &Curve, g: &Curve) -> Result<f64> {
        match self {
            MetricKind::L2 => l2_distance(f, g),
            MetricKind::LInf => linf_distance(f, g),
        }
    }
}

impl FromStr for MetricKind {
    type Err = FdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(MetricKind::L2),
            "linf" => Ok(MetricKind::LInf),
            other => Err(FdError::InvalidParameter {
                name: "metric",
                reason: format!("unknown metric {other:?}, expected \"l2\" or \"linf\""),
            }),
        }
    }
}

fn check_grids(f: &Curve, g: &Curve) -> Result<()> {
    if same_grid(f.grid(), g.grid()) {
        Ok(())
    } else {
        Err(FdError::GridMismatch)
    }
}

/// `{ integral of [f(t)-g(t)]^2 dt }^(1/2)` by the trapezoidal rule.
///
/// All quadrature weights are positive, so the distance is 0 exactly when the
/// curves agree at every grid point.
pub fn l2_distance(f: &Curve, g: &Curve) -> Result<f64> {
    check_grids(f, g)?;
    let sq: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .collect();
    Ok(f.grid().trapezoid(&sq).sqrt())
}

/// `max_j |f(t_j) - g(t_j)|`; curves exist only at grid points, so no
/// interpolation is attempted.
pub fn linf_distance(f: &Curve, g: &Curve) -> Result<f64> {
    check_grids(f, g)?;
    Ok(f.values()
        .iter()
        .zip(g.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}
