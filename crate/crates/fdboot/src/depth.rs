//! Functional depth: center-outward orderings of sample curves.
//!
//! Two notions are implemented. The rank-integral depth integrates the
//! pointwise centrality `1 - |1/2 - F1[X_i(t)]|` of each curve under the
//! empirical marginal distribution. The alpha-radius depth scores each curve
//! by the distance to its `ceil(alpha*n)`-th nearest neighbour, so small radii
//! mean dense regions.

use crate::error::{FdError, Result};
use crate::metrics::MetricKind;
use crate::sample::FunctionalSample;
use crate::util::{argsort_ascending, argsort_descending, ceil_count};

/// Depth notion used to rank curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthMethod {
    /// Rank-integral (Fraiman-Muniz) depth; larger scores are deeper.
    FraimanMuniz,
    /// Neighbour-radius (Gervini) depth; smaller scores are deeper.
    /// `alpha` must lie in (0, 1]; distances default to L2.
    AlphaRadius { alpha: f64 },
}

impl DepthMethod {
    pub const DEFAULT_ALPHA: f64 = 0.5;

    pub fn alpha_radius_default() -> Self {
        DepthMethod::AlphaRadius {
            alpha: Self::DEFAULT_ALPHA,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DepthMethod::FraimanMuniz => "fm",
            DepthMethod::AlphaRadius { .. } => "radius",
        }
    }
}

/// Per-curve depth values plus the induced deep-to-shallow ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthScores {
    method: DepthMethod,
    scores: Vec<f64>,
    order: Vec<usize>,
}

impl DepthScores {
    pub fn method(&self) -> DepthMethod {
        self.method
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Original indices ordered deepest first; ties go to the lower index.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn deepest(&self) -> usize {
        self.order[0]
    }

    /// Rank of each curve, 0 = deepest.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (rank, &idx) in self.order.iter().enumerate() {
            ranks[idx] = rank;
        }
        ranks
    }
}

/// Computes depth scores with the method's default distance (L2 for the
/// alpha-radius depth).
pub fn depth_scores(sample: &FunctionalSample, method: DepthMethod) -> Result<DepthScores> {
    match method {
        DepthMethod::FraimanMuniz => Ok(fm_depth(sample)),
        DepthMethod::AlphaRadius { alpha } => alpha_radius_depth(sample, alpha, MetricKind::L2),
    }
}

/// Rank-integral depth `I_i = integral of 1 - |1/2 - F1[X_i(t)]| dt`.
///
/// `F1` is the empirical marginal CDF with the weak inequality, so each curve
/// counts itself and `F1` lies in `[1/n, 1]`. Scores therefore stay within
/// `[span/2, span]` and larger is deeper.
pub fn fm_depth(sample: &FunctionalSample) -> DepthScores {
    let n = sample.n();
    let t_len = sample.grid().len();
    let n_f = n as f64;

    // Per-grid-point centralities, row-major like the sample itself.
    let mut centrality = vec![0.0; n * t_len];
    let mut column = vec![0.0; n];
    for j in 0..t_len {
        for (i, row) in sample.rows().enumerate() {
            column[i] = row[j];
        }
        let mut sorted = column.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        for i in 0..n {
            let le = sorted.partition_point(|&x| x <= column[i]);
            let cdf = le as f64 / n_f;
            centrality[i * t_len + j] = 1.0 - (0.5 - cdf).abs();
        }
    }

    let grid = sample.grid();
    let scores: Vec<f64> = (0..n)
        .map(|i| grid.trapezoid(&centrality[i * t_len..(i + 1) * t_len]))
        .collect();
    let order = argsort_descending(&scores);
    DepthScores {
        method: DepthMethod::FraimanMuniz,
        scores,
        order,
    }
}

/// Precomputed rank structure for evaluating rank-integral depth on
/// resamples of one fixed sample without re-sorting columns.
///
/// For a resample given by row indices, the count of resample values at a
/// grid point that are `<=` a present row's value equals a prefix sum of row
/// multiplicities taken in the original column's sorted order. Scores are
/// bit-identical to running [`fm_depth`] on the gathered copy: the counts are
/// the same integers and the centrality/quadrature arithmetic is shared.
pub(crate) struct FmResampleCache {
    grid: std::sync::Arc<crate::grid::Grid>,
    n: usize,
    /// `[j*n + i]`: position of row `i`'s value within the sorted column `j`.
    sorted_pos: Vec<u32>,
    /// `[j*n + i]`: number of original column-`j` values `<=` row `i`'s value.
    upper: Vec<u32>,
    // reusable per-evaluation scratch
    counts: Vec<u32>,
    centrality: Vec<f64>,
    present: Vec<bool>,
}

impl FmResampleCache {
    pub fn new(sample: &FunctionalSample) -> Self {
        let n = sample.n();
        let t_len = sample.grid().len();
        let mut sorted_pos = vec![0u32; n * t_len];
        let mut upper = vec![0u32; n * t_len];
        let mut column: Vec<f64> = vec![0.0; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for j in 0..t_len {
            for (i, row) in sample.rows().enumerate() {
                column[i] = row[j];
            }
            order.clear();
            order.extend(0..n);
            order.sort_unstable_by(|&a, &b| column[a].total_cmp(&column[b]));
            let mut sorted = column.clone();
            sorted.sort_unstable_by(f64::total_cmp);
            for (pos, &i) in order.iter().enumerate() {
                sorted_pos[j * n + i] = pos as u32;
            }
            for i in 0..n {
                upper[j * n + i] = sorted.partition_point(|&x| x <= column[i]) as u32;
            }
        }
        FmResampleCache {
            grid: sample.grid().clone(),
            n,
            sorted_pos,
            upper,
            counts: vec![0u32; n],
            centrality: vec![0.0; n * t_len],
            present: vec![false; n],
        }
    }

    /// Depth scores of the resample `{rows[idx[0]], rows[idx[1]], ...}`,
    /// indexed by resample position.
    pub fn scores(&mut self, idx: &[usize]) -> Vec<f64> {
        debug_assert_eq!(idx.len(), self.n);
        let n = self.n;
        let t_len = self.grid.len();
        let n_f = n as f64;

        self.present.iter_mut().for_each(|p| *p = false);
        let mut distinct: Vec<usize> = Vec::with_capacity(n);
        for &i in idx {
            if !self.present[i] {
                self.present[i] = true;
                distinct.push(i);
            }
        }

        for j in 0..t_len {
            let base = j * n;
            self.counts.iter_mut().for_each(|c| *c = 0);
            for &i in idx {
                self.counts[self.sorted_pos[base + i] as usize] += 1;
            }
            let mut run = 0u32;
            for c in self.counts.iter_mut() {
                run += *c;
                *c = run;
            }
            for &r in &distinct {
                let le = self.counts[self.upper[base + r] as usize - 1];
                let cdf = le as f64 / n_f;
                self.centrality[r * t_len + j] = 1.0 - (0.5 - cdf).abs();
            }
        }

        let mut by_row = vec![0.0; n];
        for &r in &distinct {
            by_row[r] = self.grid.trapezoid(&self.centrality[r * t_len..(r + 1) * t_len]);
        }
        idx.iter().map(|&i| by_row[i]).collect()
    }
}

/// Neighbour-radius depth: `r_i` is the `ceil(alpha*n)`-th smallest distance
/// from curve `i` to the other curves (self-distance excluded).
pub fn alpha_radius_depth(
    sample: &FunctionalSample,
    alpha: f64,
    metric: MetricKind,
) -> Result<DepthScores> {
    let n = sample.n();
    if n < 2 {
        return Err(FdError::InsufficientSample { needed: 2, got: n });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(FdError::InvalidParameter {
            name: "alpha",
            reason: format!("{alpha} not in (0, 1]"),
        });
    }
    let k = ceil_count(alpha * n as f64);
    if k > n - 1 {
        return Err(FdError::InfeasibleAlpha { alpha, n });
    }

    // Symmetric pairwise distances; each needs only the upper triangle.
    let curves: Vec<_> = (0..n).map(|i| sample.curve(i)).collect();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.distance(&curves[i], &curves[j])?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let scores: Vec<f64> = (0..n)
        .map(|i| {
            let mut others: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| dist[i * n + j])
                .collect();
            let (_, kth, _) = others.select_nth_unstable_by(k - 1, f64::total_cmp);
            *kth
        })
        .collect();
    let order = argsort_ascending(&scores);
    Ok(DepthScores {
        method: DepthMethod::AlphaRadius { alpha },
        scores,
        order,
    })
}
