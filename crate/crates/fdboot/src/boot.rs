//! Plain and smooth i.i.d. resampling, single and double bootstrap distance
//! generation, cut-off and confidence-band construction, and the coverage
//! indicator.
//!
//! The double bootstrap resamples from each first-level bootstrap sample with
//! the same method, pools all `B1 * B2` second-level distances into one
//! quantile, and uses that cut-off to calibrate the band. First-level RNG
//! streams do not depend on whether a second level is requested, so single
//! and double runs under one seed share their level-1 draws.

use std::str::FromStr;

use rand::Rng;

use crate::error::{FdError, Result};
use crate::grid::Curve;
use crate::linalg::GaussianFactor;
use crate::metrics::MetricKind;
use crate::rng::{roles, RngStream};
use crate::sample::{empirical_covariance, FunctionalSample};
use crate::stats::{evaluate_statistic, ResampleEvaluator, StatisticKind};
use crate::util::ceil_count;

/// How bootstrap samples are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BootstrapMethod {
    /// Rows drawn uniformly with replacement.
    Plain,
    /// Plain resample plus mean-zero Gaussian noise with covariance
    /// `beta * empirical covariance`, re-estimated on whatever sample is
    /// being resampled. Avoids repeated curves in the resample.
    Smooth { beta: f64 },
}

impl BootstrapMethod {
    pub const DEFAULT_BETA: f64 = 0.05;

    pub fn from_cli(name: &str, beta: f64) -> Result<Self> {
        if beta < 0.0 || !beta.is_finite() {
            return Err(FdError::InvalidParameter {
                name: "beta",
                reason: format!("{beta} must be >= 0"),
            });
        }
        match name.to_ascii_lowercase().as_str() {
            "plain" => Ok(BootstrapMethod::Plain),
            "smooth" => Ok(BootstrapMethod::Smooth { beta }),
            other => Err(FdError::InvalidParameter {
                name: "bootstrap",
                reason: format!("unknown bootstrap {other:?}, expected \"plain\" or \"smooth\""),
            }),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BootstrapMethod::Plain => "plain",
            BootstrapMethod::Smooth { .. } => "smooth",
        }
    }

    /// Smoothing with `beta = 0` adds no noise; treat it as plain so the two
    /// are exactly interchangeable.
    fn effective(&self) -> BootstrapMethod {
        match self {
            BootstrapMethod::Smooth { beta } if *beta == 0.0 => BootstrapMethod::Plain,
            other => *other,
        }
    }
}

impl FromStr for BootstrapMethod {
    type Err = FdError;

    fn from_str(s: &str) -> Result<Self> {
        BootstrapMethod::from_cli(s, Self::DEFAULT_BETA)
    }
}

/// Whether a distance set (and the CI built from it) came from the single or
/// the double bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMethod {
    Single,
    Double,
}

impl CiMethod {
    pub fn label(&self) -> &'static str {
        match self {
            CiMethod::Single => "single",
            CiMethod::Double => "double",
        }
    }
}

/// The multiset of bootstrap distances a cut-off is taken from, plus the
/// first-level statistic curves.
#[derive(Debug, Clone)]
pub struct BootstrapDistances {
    level: CiMethod,
    distances: Vec<f64>,
    statistic_curves: Vec<Curve>,
}

impl BootstrapDistances {
    pub fn level(&self) -> CiMethod {
        self.level
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// First-level statistic curves, one per outer bootstrap repetition.
    pub fn statistic_curves(&self) -> &[Curve] {
        &self.statistic_curves
    }

    pub fn cutoff(&self, delta: f64) -> Result<f64> {
        cutoff(&self.distances, delta)
    }
}

fn draw_indices<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Resamples `n` rows uniformly with replacement; every output row is a
/// bitwise copy of some input row.
pub fn iid_resample<R: Rng>(sample: &FunctionalSample, rng: &mut R) -> FunctionalSample {
    let indices = draw_indices(rng, sample.n());
    sample.gather(&indices)
}

/// Plain resample plus white noise with covariance `beta * cov(sample)`.
///
/// Indices are drawn before the noise, and `beta = 0` short-circuits to the
/// plain resample, so both methods produce identical index draws from a
/// shared stream.
pub fn smooth_resample<R: Rng>(
    sample: &FunctionalSample,
    beta: f64,
    rng: &mut R,
) -> Result<FunctionalSample> {
    if beta < 0.0 || !beta.is_finite() {
        return Err(FdError::InvalidParameter {
            name: "beta",
            reason: format!("{beta} must be >= 0"),
        });
    }
    if beta == 0.0 {
        return Ok(iid_resample(sample, rng));
    }
    let factor = GaussianFactor::new(
        sample.grid().len(),
        empirical_covariance(sample)?.values(),
    )?;
    let indices = draw_indices(rng, sample.n());
    Ok(add_noise(sample.gather(&indices), &factor, beta, rng))
}

fn add_noise<R: Rng>(
    resample: FunctionalSample,
    factor: &GaussianFactor,
    beta: f64,
    rng: &mut R,
) -> FunctionalSample {
    let t_len = resample.grid().len();
    let n = resample.n();
    let scale = beta.sqrt();
    let mut values: Vec<f64> = Vec::with_capacity(n * t_len);
    for row in resample.rows() {
        values.extend_from_slice(row);
    }
    let mut scratch = vec![0.0; t_len];
    for i in 0..n {
        factor.add_sample_into(rng, scale, &mut values[i * t_len..(i + 1) * t_len], &mut scratch);
    }
    FunctionalSample::from_raw(resample.grid().clone(), values, n)
}

/// One full bootstrap pass: the sample statistic, every first-level statistic
/// curve and distance, and (when requested) the pooled second-level
/// distances.
pub(crate) struct BootRun {
    pub theta_hat: Curve,
    pub level1_curves: Vec<Curve>,
    pub level1_dists: Vec<f64>,
    pub level2_dists: Option<Vec<f64>>,
}

pub(crate) fn bootstrap_run(
    sample: &FunctionalSample,
    stat: &StatisticKind,
    metric: MetricKind,
    method: &BootstrapMethod,
    b1: usize,
    b2: Option<usize>,
    base: &RngStream,
) -> Result<BootRun> {
    if b1 == 0 {
        return Err(FdError::InvalidParameter {
            name: "b1",
            reason: "must be >= 1".into(),
        });
    }
    if b2 == Some(0) {
        return Err(FdError::InvalidParameter {
            name: "b2",
            reason: "must be >= 1".into(),
        });
    }
    let n = sample.n();
    let theta_hat = evaluate_statistic(stat, sample)?;

    let mut level1_curves = Vec::with_capacity(b1);
    let mut level1_dists = Vec::with_capacity(b1);
    let mut level2_dists = b2.map(|b2| Vec::with_capacity(b1 * b2));

    match method.effective() {
        BootstrapMethod::Plain => {
            let mut evaluator = ResampleEvaluator::new(stat, sample);
            for b in 0..b1 {
                let mut idx_rng = base.substream(&[roles::LEVEL_ONE, b as u64, 0]).rng();
                let idx1 = draw_indices(&mut idx_rng, n);
                let theta_b = evaluator.eval(sample, &idx1)?;
                if let (Some(pool), Some(b2)) = (level2_dists.as_mut(), b2) {
                    for eta in 0..b2 {
                        let mut rng = base
                            .substream(&[roles::LEVEL_TWO, b as u64, eta as u64])
                            .rng();
                        // Second-level rows are rows of the first-level
                        // resample, i.e. original rows under composed indices.
                        let composed: Vec<usize> =
                            draw_indices(&mut rng, n).into_iter().map(|j| idx1[j]).collect();
                        let theta_be = evaluator.eval(sample, &composed)?;
                        pool.push(metric.distance(&theta_be, &theta_b)?);
                    }
                }
                level1_dists.push(metric.distance(&theta_b, &theta_hat)?);
                level1_curves.push(theta_b);
            }
        }
        BootstrapMethod::Smooth { beta } => {
            let factor = GaussianFactor::new(
                sample.grid().len(),
                empirical_covariance(sample)?.values(),
            )?;
            for b in 0..b1 {
                let mut idx_rng = base.substream(&[roles::LEVEL_ONE, b as u64, 0]).rng();
                let idx1 = draw_indices(&mut idx_rng, n);
                let mut noise_rng = base.substream(&[roles::NOISE_ONE, b as u64, 0]).rng();
                let s1 = add_noise(sample.gather(&idx1), &factor, beta, &mut noise_rng);
                let theta_b = evaluate_statistic(stat, &s1)?;
                if let (Some(pool), Some(b2)) = (level2_dists.as_mut(), b2) {
                    // Same bootstrap method at the second level, with the
                    // covariance re-estimated on the first-level resample.
                    let factor1 =
                        GaussianFactor::new(s1.grid().len(), empirical_covariance(&s1)?.values())?;
                    for eta in 0..b2 {
                        let mut idx_rng = base
                            .substream(&[roles::LEVEL_TWO, b as u64, eta as u64])
                            .rng();
                        let idx2 = draw_indices(&mut idx_rng, n);
                        let mut noise_rng = base
                            .substream(&[roles::NOISE_TWO, b as u64, eta as u64])
                            .rng();
                        let s2 = add_noise(s1.gather(&idx2), &factor1, beta, &mut noise_rng);
                        let theta_be = evaluate_statistic(stat, &s2)?;
                        pool.push(metric.distance(&theta_be, &theta_b)?);
                    }
                }
                level1_dists.push(metric.distance(&theta_b, &theta_hat)?);
                level1_curves.push(theta_b);
            }
        }
    }

    Ok(BootRun {
        theta_hat,
        level1_curves,
        level1_dists,
        level2_dists,
    })
}

/// Draws `B1` bootstrap samples, computes the statistic on each, and returns
/// the distances `D(theta^b, theta_hat)` together with the statistic curves.
pub fn single_bootstrap(
    sample: &FunctionalSample,
    stat: &StatisticKind,
    metric: MetricKind,
    method: &BootstrapMethod,
    b1: usize,
    base: &RngStream,
) -> Result<BootstrapDistances> {
    let run = bootstrap_run(sample, stat, metric, method, b1, None, base)?;
    Ok(BootstrapDistances {
        level: CiMethod::Single,
        distances: run.level1_dists,
        statistic_curves: run.level1_curves,
    })
}

/// For each of the `B1` first-level resamples, draws `B2` second-level
/// resamples from it and pools all `B1 * B2` distances
/// `D(theta^{b,eta}, theta^b)`.
pub fn double_bootstrap(
    sample: &FunctionalSample,
    stat: &StatisticKind,
    metric: MetricKind,
    method: &BootstrapMethod,
    b1: usize,
    b2: usize,
    base: &RngStream,
) -> Result<BootstrapDistances> {
    let run = bootstrap_run(sample, stat, metric, method, b1, Some(b2), base)?;
    Ok(BootstrapDistances {
        level: CiMethod::Double,
        distances: run.level2_dists.expect("second level was requested"),
        statistic_curves: run.level1_curves,
    })
}

/// The `ceil((1 - delta) * M)`-th order statistic of the `M` distances.
///
/// No interpolation: the cut-off is always an observed distance.
pub fn cutoff(distances: &[f64], delta: f64) -> Result<f64> {
    if distances.is_empty() {
        return Err(FdError::EmptyDistances);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(FdError::InvalidParameter {
            name: "delta",
            reason: format!("{delta} not in (0, 1)"),
        });
    }
    let m = distances.len();
    let k = ceil_count((1.0 - delta) * m as f64).clamp(1, m);
    let mut sorted = distances.to_vec();
    let (_, kth, _) = sorted.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}

/// True when the estimate lies within `cutoff` of the target (closed
/// inequality: a distance exactly at the cut-off counts as covered).
pub fn covers(
    sample_estimate: &Curve,
    target: &Curve,
    cutoff: f64,
    metric: MetricKind,
) -> Result<bool> {
    Ok(metric.distance(sample_estimate, target)? <= cutoff)
}

/// A bootstrap confidence band for one statistic.
#[derive(Debug, Clone)]
pub struct ConfidenceBand {
    pub estimate: Curve,
    pub lower: Curve,
    pub upper: Curve,
    pub cutoff: f64,
    pub level: f64,
    pub method: CiMethod,
    /// Set when no first-level curve fell inside the cut-off and the band was
    /// built from the single nearest curve instead.
    pub degenerate: bool,
}

/// Builds the `100*level%` band for `stat`: the cut-off comes from the single
/// bootstrap distances, or from the pooled double-bootstrap distances when
/// `b2` is given; the band is the pointwise envelope of the accepted
/// first-level curves (the estimate itself is always included, so
/// `lower <= estimate <= upper` holds pointwise).
#[allow(clippy::too_many_arguments)]
pub fn confidence_band(
    sample: &FunctionalSample,
    stat: &StatisticKind,
    metric: MetricKind,
    method: &BootstrapMethod,
    level: f64,
    b1: usize,
    b2: Option<usize>,
    base: &RngStream,
) -> Result<ConfidenceBand> {
    if !(level > 0.0 && level < 1.0) {
        return Err(FdError::InvalidParameter {
            name: "level",
            reason: format!("{level} not in (0, 1)"),
        });
    }
    let run = bootstrap_run(sample, stat, metric, method, b1, b2, base)?;
    let (cutoff_dists, ci_method) = match &run.level2_dists {
        Some(pool) => (pool.as_slice(), CiMethod::Double),
        None => (run.level1_dists.as_slice(), CiMethod::Single),
    };
    let c = cutoff(cutoff_dists, 1.0 - level)?;

    let accepted: Vec<usize> = (0..b1).filter(|&b| run.level1_dists[b] <= c).collect();
    let degenerate = accepted.is_empty();
    let members: Vec<usize> = if degenerate {
        let nearest = run
            .level1_dists
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.total_cmp(b))
            .map(|(b, _)| b)
            .expect("b1 >= 1");
        vec![nearest]
    } else {
        accepted
    };

    let t_len = sample.grid().len();
    let mut lower = run.theta_hat.values().to_vec();
    let mut upper = lower.clone();
    for &b in &members {
        let vals = run.level1_curves[b].values();
        for j in 0..t_len {
            lower[j] = lower[j].min(vals[j]);
            upper[j] = upper[j].max(vals[j]);
        }
    }

    let grid = sample.grid().clone();
    Ok(ConfidenceBand {
        estimate: run.theta_hat,
        lower: Curve::new(grid.clone(), lower).expect("envelope of finite curves"),
        upper: Curve::new(grid, upper).expect("envelope of finite curves"),
        cutoff: c,
        level,
        method: ci_method,
        degenerate,
    })
}
