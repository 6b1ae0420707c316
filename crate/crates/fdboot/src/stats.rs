//! Descriptive statistics of a functional sample: pointwise mean and
//! variance, depth-based median, and depth-trimmed mean.

use std::str::FromStr;

use crate::depth::{depth_scores, DepthMethod, DepthScores, FmResampleCache};
use crate::error::{FdError, Result};
use crate::grid::Curve;
use crate::sample::FunctionalSample;
use crate::util::{argsort_descending, ceil_count};

/// The statistic whose distribution the bootstrap estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatisticKind {
    Mean,
    Variance,
    Median { depth: DepthMethod },
    TrimmedMean { gamma: f64, depth: DepthMethod },
}

impl StatisticKind {
    pub const DEFAULT_GAMMA: f64 = 0.05;

    /// Builds a statistic from its CLI name, overriding the depth and
    /// trimming parameters where they apply.
    pub fn from_cli(name: &str, alpha: f64, gamma: f64) -> Result<Self> {
        let radius = DepthMethod::AlphaRadius { alpha };
        let kind = match name.to_ascii_lowercase().as_str() {
            "mean" => StatisticKind::Mean,
            "variance" => StatisticKind::Variance,
            "median-fm" => StatisticKind::Median {
                depth: DepthMethod::FraimanMuniz,
            },
            "median-radius" => StatisticKind::Median { depth: radius },
            "trimmed-fm" => StatisticKind::TrimmedMean {
                gamma,
                depth: DepthMethod::FraimanMuniz,
            },
            "trimmed-radius" => StatisticKind::TrimmedMean {
                gamma,
                depth: radius,
            },
            other => {
                return Err(FdError::InvalidParameter {
                    name: "statistic",
                    reason: format!("unknown statistic {other:?}"),
                })
            }
        };
        if !(0.0..1.0).contains(&gamma) {
            return Err(FdError::InvalidParameter {
                name: "gamma",
                reason: format!("{gamma} not in [0, 1)"),
            });
        }
        Ok(kind)
    }

    pub fn label(&self) -> &'static str {
        match self {
            StatisticKind::Mean => "mean",
            StatisticKind::Variance => "variance",
            StatisticKind::Median { .. } => "median",
            StatisticKind::TrimmedMean { .. } => "trimmed",
        }
    }

    pub fn depth(&self) -> Option<DepthMethod> {
        match self {
            StatisticKind::Mean | StatisticKind::Variance => None,
            StatisticKind::Median { depth } => Some(*depth),
            StatisticKind::TrimmedMean { depth, .. } => Some(*depth),
        }
    }

    pub fn depth_label(&self) -> &'static str {
        self.depth().map_or("-", |d| d.label())
    }
}

impl FromStr for StatisticKind {
    type Err = FdError;

    fn from_str(s: &str) -> Result<Self> {
        StatisticKind::from_cli(s, DepthMethod::DEFAULT_ALPHA, StatisticKind::DEFAULT_GAMMA)
    }
}

/// Pointwise mean over the rows listed in `indices`, accumulated in index
/// order. Using the same loop for the full mean and the trimmed mean keeps
/// `gamma = 0` bit-identical to the plain mean.
fn mean_over(sample: &FunctionalSample, indices: &[usize]) -> Curve {
    let t_len = sample.grid().len();
    let mut acc = vec![0.0; t_len];
    for &i in indices {
        for (a, v) in acc.iter_mut().zip(sample.row(i)) {
            *a += v;
        }
    }
    let count = indices.len() as f64;
    for a in &mut acc {
        *a /= count;
    }
    Curve::new(sample.grid().clone(), acc).expect("mean of finite rows is finite")
}

/// Pointwise arithmetic mean of all curves.
pub fn functional_mean(sample: &FunctionalSample) -> Curve {
    let all: Vec<usize> = (0..sample.n()).collect();
    mean_over(sample, &all)
}

fn variance_over(sample: &FunctionalSample, indices: &[usize]) -> Result<Curve> {
    let n = indices.len();
    if n < 2 {
        return Err(FdError::InsufficientSample { needed: 2, got: n });
    }
    let mean = mean_over(sample, indices);
    let t_len = sample.grid().len();
    let mut acc = vec![0.0; t_len];
    for &i in indices {
        for ((a, v), m) in acc.iter_mut().zip(sample.row(i)).zip(mean.values()) {
            let d = v - m;
            *a += d * d;
        }
    }
    let dof = n as f64 - 1.0;
    for a in &mut acc {
        *a /= dof;
    }
    Ok(Curve::new(sample.grid().clone(), acc).expect("variance of finite rows is finite"))
}

/// Pointwise unbiased sample variance `1/(n-1) sum [X_i(t) - mean(t)]^2`.
pub fn functional_variance(sample: &FunctionalSample) -> Result<Curve> {
    let all: Vec<usize> = (0..sample.n()).collect();
    variance_over(sample, &all)
}

/// The deepest curve of the sample plus its original index.
pub fn functional_median(
    sample: &FunctionalSample,
    depth: DepthMethod,
) -> Result<(Curve, usize)> {
    let idx = median_index(sample, depth)?;
    Ok((sample.curve(idx), idx))
}

fn median_index(sample: &FunctionalSample, depth: DepthMethod) -> Result<usize> {
    if sample.n() == 1 {
        // A single curve is its own median under either depth.
        return Ok(0);
    }
    Ok(depth_scores(sample, depth)?.deepest())
}

/// Kept-index set for a trimmed mean: the `n - ceil(gamma*n)` deepest curves,
/// returned in ascending original order.
fn trimmed_indices(scores: &DepthScores, gamma: f64, n: usize) -> Result<Vec<usize>> {
    let trimmed = ceil_count(gamma * n as f64);
    if trimmed >= n {
        return Err(FdError::InfeasibleGamma { gamma, n });
    }
    let mut kept: Vec<usize> = scores.order()[..n - trimmed].to_vec();
    kept.sort_unstable();
    Ok(kept)
}

/// Mean of the `100(1-gamma)%` deepest curves.
pub fn trimmed_mean(sample: &FunctionalSample, gamma: f64, depth: DepthMethod) -> Result<Curve> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(FdError::InvalidParameter {
            name: "gamma",
            reason: format!("{gamma} not in [0, 1)"),
        });
    }
    let n = sample.n();
    if ceil_count(gamma * n as f64) == 0 {
        // Nothing to trim; skip the depth computation entirely.
        return Ok(functional_mean(sample));
    }
    let scores = depth_scores(sample, depth)?;
    let kept = trimmed_indices(&scores, gamma, n)?;
    Ok(mean_over(sample, &kept))
}

/// Dispatches to the statistic named by `kind`.
pub fn evaluate_statistic(kind: &StatisticKind, sample: &FunctionalSample) -> Result<Curve> {
    match kind {
        StatisticKind::Mean => Ok(functional_mean(sample)),
        StatisticKind::Variance => functional_variance(sample),
        StatisticKind::Median { depth } => Ok(functional_median(sample, *depth)?.0),
        StatisticKind::TrimmedMean { gamma, depth } => trimmed_mean(sample, *gamma, *depth),
    }
}

/// Evaluates `kind` on the resample `{rows[indices[0]], rows[indices[1]], ...}`
/// without materializing it when the statistic only needs row passes.
///
/// Bit-identical to `evaluate_statistic(kind, &sample.gather(indices))`: the
/// mean and variance fast paths visit rows in exactly the order a gathered
/// copy would.
pub(crate) fn evaluate_on_indices(
    kind: &StatisticKind,
    sample: &FunctionalSample,
    indices: &[usize],
) -> Result<Curve> {
    match kind {
        StatisticKind::Mean => Ok(mean_over(sample, indices)),
        StatisticKind::Variance => variance_over(sample, indices),
        StatisticKind::TrimmedMean { gamma, .. }
            if ceil_count(gamma * indices.len() as f64) == 0 =>
        {
            Ok(mean_over(sample, indices))
        }
        _ => evaluate_statistic(kind, &sample.gather(indices)),
    }
}

/// Statistic evaluator for many resamples of one fixed sample.
///
/// Rank-integral depth statistics reuse a per-sample [`FmResampleCache`]; all
/// results stay bit-identical to `evaluate_statistic` on a gathered copy.
pub(crate) enum ResampleEvaluator {
    Direct(StatisticKind),
    FmMedian(FmResampleCache),
    FmTrimmed(FmResampleCache, f64),
}

impl ResampleEvaluator {
    pub fn new(kind: &StatisticKind, sample: &FunctionalSample) -> Self {
        match kind {
            StatisticKind::Median {
                depth: DepthMethod::FraimanMuniz,
            } if sample.n() > 1 => ResampleEvaluator::FmMedian(FmResampleCache::new(sample)),
            StatisticKind::TrimmedMean {
                gamma,
                depth: DepthMethod::FraimanMuniz,
            } if ceil_count(gamma * sample.n() as f64) > 0 => {
                ResampleEvaluator::FmTrimmed(FmResampleCache::new(sample), *gamma)
            }
            other => ResampleEvaluator::Direct(*other),
        }
    }

    pub fn eval(&mut self, sample: &FunctionalSample, indices: &[usize]) -> Result<Curve> {
        match self {
            ResampleEvaluator::Direct(kind) => evaluate_on_indices(kind, sample, indices),
            ResampleEvaluator::FmMedian(cache) => {
                let scores = cache.scores(indices);
                let order = argsort_descending(&scores);
                Ok(sample.curve(indices[order[0]]))
            }
            ResampleEvaluator::FmTrimmed(cache, gamma) => {
                let n = indices.len();
                let trimmed = ceil_count(*gamma * n as f64);
                if trimmed >= n {
                    return Err(FdError::InfeasibleGamma { gamma: *gamma, n });
                }
                let scores = cache.scores(indices);
                let order = argsort_descending(&scores);
                let mut kept = order[..n - trimmed].to_vec();
                kept.sort_unstable();
                let composed: Vec<usize> = kept.iter().map(|&p| indices[p]).collect();
                Ok(mean_over(sample, &composed))
            }
        }
    }
}
