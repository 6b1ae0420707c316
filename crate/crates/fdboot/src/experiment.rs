//! Monte Carlo coverage experiments.
//!
//! Each replication simulates a fresh sample, runs the single and double
//! bootstrap on it under shared first-level draws, and records whether the
//! population statistic falls within the cut-off at every nominal level.
//! Replications execute in parallel over pre-assigned RNG streams and are
//! folded in replication order, so results are identical for any worker
//! count.

use rayon::prelude::*;

use crate::boot::{bootstrap_run, cutoff, BootstrapMethod, CiMethod};
use crate::error::{FdError, Result};
use crate::metrics::MetricKind;
use crate::rng::{roles, RngStream};
use crate::sim::{population_target, GpSampler, GpSpec};
use crate::stats::StatisticKind;

/// Full description of one coverage experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub gp: GpSpec,
    pub statistic: StatisticKind,
    pub metric: MetricKind,
    pub bootstrap: BootstrapMethod,
    pub b1: usize,
    pub b2: usize,
    pub replications: usize,
    pub nominal_levels: Vec<f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub const DEFAULT_B: usize = 399;
    pub const DEFAULT_REPLICATIONS: usize = 200;

    /// Nominal levels 0.50, 0.55, ..., 0.95. Built by division so each level
    /// is the double nearest the decimal and prints as written.
    pub fn default_levels() -> Vec<f64> {
        (10..=19).map(|i| i as f64 / 20.0).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.b1 == 0 || self.b2 == 0 {
            return Err(FdError::InvalidParameter {
                name: "b1/b2",
                reason: "bootstrap repetition counts must be >= 1".into(),
            });
        }
        if self.replications == 0 {
            return Err(FdError::InvalidParameter {
                name: "replications",
                reason: "must be >= 1".into(),
            });
        }
        if self.nominal_levels.is_empty() {
            return Err(FdError::InvalidParameter {
                name: "levels",
                reason: "need at least one nominal level".into(),
            });
        }
        for w in self.nominal_levels.windows(2) {
            if w[0] >= w[1] {
                return Err(FdError::InvalidParameter {
                    name: "levels",
                    reason: format!("levels must be strictly increasing, got {} >= {}", w[0], w[1]),
                });
            }
        }
        if self
            .nominal_levels
            .iter()
            .any(|&l| !(l > 0.0 && l < 1.0))
        {
            return Err(FdError::InvalidParameter {
                name: "levels",
                reason: "levels must lie in (0, 1)".into(),
            });
        }
        Ok(())
    }
}

/// Identifying parameters echoed into every output table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentMeta {
    pub statistic: &'static str,
    pub depth: &'static str,
    pub metric: &'static str,
    pub bootstrap: &'static str,
    pub n: usize,
    pub t_points: usize,
    pub replications: usize,
    pub seed: u64,
}

impl ExperimentMeta {
    fn from_config(config: &ExperimentConfig) -> Self {
        ExperimentMeta {
            statistic: config.statistic.label(),
            depth: config.statistic.depth_label(),
            metric: config.metric.label(),
            bootstrap: config.bootstrap.label(),
            n: config.gp.n,
            t_points: config.gp.grid.len(),
            replications: config.replications,
            seed: config.seed,
        }
    }
}

/// One (method, nominal level) cell of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub b1: usize,
    pub b2: usize,
    pub method: CiMethod,
    pub nominal: f64,
    pub empirical: f64,
    pub mc_stderr: f64,
}

/// Empirical coverage rows plus the configuration they came from.
#[derive(Debug, Clone)]
pub struct CoverageTable {
    pub meta: ExperimentMeta,
    pub rows: Vec<CoverageRow>,
}

impl CoverageTable {
    /// Every empirical coverage lies in [0, 1] and is non-decreasing in the
    /// nominal level within each (b1, b2, method) group.
    pub fn check_invariants(&self) -> Result<()> {
        for row in &self.rows {
            if !(0.0..=1.0).contains(&row.empirical) {
                return Err(FdError::InvalidParameter {
                    name: "coverage",
                    reason: format!("empirical coverage {} outside [0,1]", row.empirical),
                });
            }
        }
        for w in self.rows.windows(2) {
            let same_group =
                w[0].b1 == w[1].b1 && w[0].b2 == w[1].b2 && w[0].method == w[1].method;
            if same_group && w[0].nominal < w[1].nominal && w[0].empirical > w[1].empirical {
                return Err(FdError::InvalidParameter {
                    name: "coverage",
                    reason: format!(
                        "coverage decreased from {} to {} between levels {} and {}",
                        w[0].empirical, w[1].empirical, w[0].nominal, w[1].nominal
                    ),
                });
            }
        }
        Ok(())
    }
}

struct RepOutcome {
    single: Vec<bool>,
    double: Vec<bool>,
}

fn run_replication(
    rep: &RngStream,
    rep_index: usize,
    sampler: &GpSampler,
    target: &crate::grid::Curve,
    config: &ExperimentConfig,
) -> Result<RepOutcome> {
    let sample = sampler.sample(&rep.substream(&[roles::SIMULATION, 0, 0]));
    let run = bootstrap_run(
        &sample,
        &config.statistic,
        config.metric,
        &config.bootstrap,
        config.b1,
        Some(config.b2),
        rep,
    )?;
    let d0 = config.metric.distance(&run.theta_hat, target)?;
    if d0 > 0.0 && run.level1_dists.iter().all(|&d| d == 0.0) {
        log::warn!("replication {rep_index}: all bootstrap distances are zero but D(theta_hat, theta) = {d0}; counted as non-covering");
    }
    let pool = run
        .level2_dists
        .as_deref()
        .expect("second level always requested");

    let mut single = Vec::with_capacity(config.nominal_levels.len());
    let mut double = Vec::with_capacity(config.nominal_levels.len());
    for &level in &config.nominal_levels {
        single.push(d0 <= cutoff(&run.level1_dists, 1.0 - level)?);
        double.push(d0 <= cutoff(pool, 1.0 - level)?);
    }
    Ok(RepOutcome { single, double })
}

/// Runs the full experiment and tabulates empirical coverage for the single
/// and double bootstrap at every nominal level.
pub fn run_coverage_experiment(config: &ExperimentConfig) -> Result<CoverageTable> {
    config.validate()?;
    let sampler = GpSampler::new(&config.gp)?;
    let target = population_target(&config.statistic, &config.gp);
    let root = RngStream::root(config.seed);

    let outcomes: Vec<RepOutcome> = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let rep = root.substream(&[r as u64]);
            run_replication(&rep, r, &sampler, &target, config)
        })
        .collect::<Result<Vec<_>>>()?;

    let r = config.replications as f64;
    let mut rows = Vec::with_capacity(2 * config.nominal_levels.len());
    for (method, pick) in [
        (CiMethod::Single, &|o: &RepOutcome| &o.single),
        (CiMethod::Double, &|o: &RepOutcome| &o.double),
    ] as [(CiMethod, &dyn Fn(&RepOutcome) -> &Vec<bool>); 2]
    {
        for (j, &nominal) in config.nominal_levels.iter().enumerate() {
            let hits = outcomes.iter().filter(|o| pick(o)[j]).count();
            let empirical = hits as f64 / r;
            rows.push(CoverageRow {
                b1: config.b1,
                b2: config.b2,
                method,
                nominal,
                empirical,
                mc_stderr: (empirical * (1.0 - empirical) / r).sqrt(),
            });
        }
    }

    let table = CoverageTable {
        meta: ExperimentMeta::from_config(config),
        rows,
    };
    table.check_invariants()?;
    Ok(table)
}

/// Reruns the experiment over a grid of `(B1, B2)` pairs with everything else
/// (including the seed) held fixed, concatenating the per-pair row groups.
pub fn run_sensitivity(
    config: &ExperimentConfig,
    pairs: &[(usize, usize)],
) -> Result<CoverageTable> {
    if pairs.is_empty() {
        return Err(FdError::InvalidParameter {
            name: "pairs",
            reason: "need at least one (B1, B2) pair".into(),
        });
    }
    let mut rows = Vec::new();
    for &(b1, b2) in pairs {
        let mut c = config.clone();
        c.b1 = b1;
        c.b2 = b2;
        rows.extend(run_coverage_experiment(&c)?.rows);
    }
    let table = CoverageTable {
        meta: ExperimentMeta::from_config(config),
        rows,
    };
    table.check_invariants()?;
    Ok(table)
}
