//! Single and double bootstrap confidence intervals for descriptive
//! statistics of i.i.d. functional data.
//!
//! The crate provides:
//!
//! * discretized functional samples on shared grids ([`Grid`],
//!   [`FunctionalSample`]) and their empirical covariance;
//! * L2 and sup-norm distances between curves ([`metrics`]);
//! * descriptive statistics: pointwise mean and variance, two functional
//!   depths, the depth-based median and the depth-trimmed mean ([`stats`],
//!   [`depth`]);
//! * plain and smooth i.i.d. resampling with single- and double-bootstrap
//!   cut-offs and confidence bands ([`boot`]);
//! * a Gaussian-process simulator and a Monte Carlo harness tabulating
//!   empirical versus nominal coverage ([`sim`], [`experiment`]).
//!
//! All randomness is addressed through [`RngStream`] `(seed, stream)` pairs,
//! so every result is reproducible bit-for-bit regardless of thread count.
//!
//! ```
//! use fdboot::{
//!     confidence_band, BootstrapMethod, FunctionalSample, Grid, MetricKind, RngStream,
//!     StatisticKind,
//! };
//!
//! let grid = Grid::unit_interval(21)?;
//! let rows: Vec<Vec<f64>> = (0..30)
//!     .map(|i| grid.points().iter().map(|&t| t + (i as f64) * 0.1).collect())
//!     .collect();
//! let sample = FunctionalSample::build(grid, &rows)?;
//!
//! // 95% double-bootstrap band for the functional mean.
//! let band = confidence_band(
//!     &sample,
//!     &StatisticKind::Mean,
//!     MetricKind::L2,
//!     &BootstrapMethod::Plain,
//!     0.95,
//!     199,
//!     Some(49),
//!     &RngStream::root(1),
//! )?;
//! assert!(band
//!     .lower
//!     .values()
//!     .iter()
//!     .zip(band.upper.values())
//!     .all(|(lo, hi)| lo <= hi));
//! # Ok::<(), fdboot::FdError>(())
//! ```

pub mod boot;
pub mod depth;
pub mod error;
pub mod experiment;
pub mod grid;
mod linalg;
pub mod metrics;
pub mod rng;
pub mod sample;
pub mod sim;
pub mod stats;
mod util;

pub use boot::{
    confidence_band, covers, cutoff, double_bootstrap, iid_resample, single_bootstrap,
    smooth_resample, BootstrapDistances, BootstrapMethod, CiMethod, ConfidenceBand,
};
pub use depth::{alpha_radius_depth, depth_scores, fm_depth, DepthMethod, DepthScores};
pub use error::{FdError, Result};
pub use experiment::{
    run_coverage_experiment, run_sensitivity, CoverageRow, CoverageTable, ExperimentConfig,
    ExperimentMeta,
};
pub use grid::{Curve, Grid};
pub use metrics::{l2_distance, linf_distance, MetricKind};
pub use rng::{roles, RngStream};
pub use sample::{empirical_covariance, CovMatrix, FunctionalSample};
pub use sim::{gp_mean, population_target, simulate_gp, GpKernel, GpSampler, GpSpec};
pub use stats::{
    evaluate_statistic, functional_mean, functional_median, functional_variance, trimmed_mean,
    StatisticKind,
};
