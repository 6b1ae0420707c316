//! Command-line front end: dataset generation and ingestion, coverage
//! experiments, confidence-interval bands, and depth rankings.

mod dataset;
mod errors;
mod manifest;
mod settings;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use fdboot::{
    confidence_band, depth_scores, run_coverage_experiment, BootstrapMethod, CoverageTable,
    DepthMethod, ExperimentConfig, GpKernel, GpSpec, Grid, MetricKind, RngStream, StatisticKind,
};

use dataset::{default_ids, fmt_g17, read_dataset, write_dataset};
use errors::{CliError, CliResult};
use manifest::ManifestTimer;
use settings::Settings;

#[derive(Parser)]
#[command(
    name = "fdboot",
    version,
    about = "Single and double bootstrap confidence intervals for descriptive statistics of functional data"
)]
struct Cli {
    /// Optional key=value config file; explicit flags always win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a Gaussian-process sample and write it as a dataset CSV.
    Simulate {
        /// Number of curves [default: 100]
        #[arg(long)]
        n: Option<usize>,
        /// Grid points on [0,1] [default: 101]
        #[arg(long = "t-points")]
        t_points: Option<usize>,
        /// Kernel: "exponential[:scale]" or "brownian-min" [default: exponential:0.3]
        #[arg(long)]
        kernel: Option<String>,
        /// RNG seed [default: 1; env FDBOOT_SEED overrides]
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Run a Monte Carlo coverage experiment and write a table CSV plus an
    /// empirical-vs-nominal SVG plot next to it.
    Coverage {
        /// One of: mean, variance, median-fm, median-radius, trimmed-fm,
        /// trimmed-radius [default: mean]
        #[arg(long)]
        statistic: Option<String>,
        /// Distance metric: l2 or linf [default: l2]
        #[arg(long)]
        metric: Option<String>,
        /// Bootstrap method: plain or smooth [default: plain]
        #[arg(long)]
        bootstrap: Option<String>,
        /// Number of curves per replication [default: 100]
        #[arg(long)]
        n: Option<usize>,
        /// Grid points on [0,1] [default: 101]
        #[arg(long = "t-points")]
        t_points: Option<usize>,
        /// Kernel [default: exponential:0.3]
        #[arg(long)]
        kernel: Option<String>,
        /// First-level bootstrap repetitions [default: 399]
        #[arg(long)]
        b1: Option<usize>,
        /// Second-level bootstrap repetitions [default: 399]
        #[arg(long)]
        b2: Option<usize>,
        /// Monte Carlo replications [default: 200]
        #[arg(long)]
        replications: Option<usize>,
        /// Comma-separated nominal levels [default: 0.5,0.55,...,0.95]
        #[arg(long)]
        levels: Option<String>,
        /// Alpha-radius depth parameter [default: 0.5]
        #[arg(long)]
        alpha: Option<f64>,
        /// Trimming fraction [default: 0.05]
        #[arg(long)]
        gamma: Option<f64>,
        /// Smooth-bootstrap noise scale [default: 0.05]
        #[arg(long)]
        beta: Option<f64>,
        /// RNG seed [default: 1; env FDBOOT_SEED overrides]
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path (the SVG is written alongside with extension .svg)
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Compute single- and double-bootstrap confidence bands for a dataset.
    Ci {
        /// Input dataset CSV
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Statistic name [default: mean]
        #[arg(long)]
        statistic: Option<String>,
        /// Distance metric [default: l2]
        #[arg(long)]
        metric: Option<String>,
        /// Bootstrap method [default: plain]
        #[arg(long)]
        bootstrap: Option<String>,
        /// Confidence level [default: 0.95]
        #[arg(long)]
        level: Option<f64>,
        /// First-level bootstrap repetitions [default: 399]
        #[arg(long)]
        b1: Option<usize>,
        /// Second-level bootstrap repetitions [default: 399]
        #[arg(long)]
        b2: Option<usize>,
        /// Alpha-radius depth parameter [default: 0.5]
        #[arg(long)]
        alpha: Option<f64>,
        /// Trimming fraction [default: 0.05]
        #[arg(long)]
        gamma: Option<f64>,
        /// Smooth-bootstrap noise scale [default: 0.05]
        #[arg(long)]
        beta: Option<f64>,
        /// RNG seed [default: 1; env FDBOOT_SEED overrides]
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path (the SVG is written alongside with extension .svg)
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Rank the curves of a dataset by functional depth.
    Depth {
        /// Input dataset CSV
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Depth method: fm or radius [default: fm]
        #[arg(long)]
        method: Option<String>,
        /// Alpha-radius depth parameter [default: 0.5]
        #[arg(long)]
        alpha: Option<f64>,
        /// Output CSV path
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            err.exit_code()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Simulate {
            n,
            t_points,
            kernel,
            seed,
            out,
        } => cmd_simulate(&settings, n, t_points, kernel, seed, &out),
        Command::Coverage {
            statistic,
            metric,
            bootstrap,
            n,
            t_points,
            kernel,
            b1,
            b2,
            replications,
            levels,
            alpha,
            gamma,
            beta,
            seed,
            out,
        } => {
            let params = StatParams::resolve(&settings, statistic, metric, bootstrap, alpha, gamma, beta)?;
            cmd_coverage(&settings, params, n, t_points, kernel, b1, b2, replications, levels, seed, &out)
        }
        Command::Ci {
            input,
            statistic,
            metric,
            bootstrap,
            level,
            b1,
            b2,
            alpha,
            gamma,
            beta,
            seed,
            out,
        } => {
            let params = StatParams::resolve(&settings, statistic, metric, bootstrap, alpha, gamma, beta)?;
            cmd_ci(&settings, &input, params, level, b1, b2, seed, &out)
        }
        Command::Depth {
            input,
            method,
            alpha,
            out,
        } => cmd_depth(&settings, &input, method, alpha, &out),
    }
}

/// The statistic/metric/bootstrap triple shared by `coverage` and `ci`.
struct StatParams {
    statistic: StatisticKind,
    statistic_name: String,
    metric: MetricKind,
    bootstrap: BootstrapMethod,
    alpha: f64,
    gamma: f64,
    beta: f64,
}

impl StatParams {
    fn resolve(
        settings: &Settings,
        statistic: Option<String>,
        metric: Option<String>,
        bootstrap: Option<String>,
        alpha: Option<f64>,
        gamma: Option<f64>,
        beta: Option<f64>,
    ) -> CliResult<Self> {
        let statistic_name = settings.resolve(statistic, "statistic", "mean".into())?;
        let metric_name: String = settings.resolve(metric, "metric", "l2".into())?;
        let bootstrap_name: String = settings.resolve(bootstrap, "bootstrap", "plain".into())?;
        let alpha = settings.resolve(alpha, "alpha", DepthMethod::DEFAULT_ALPHA)?;
        let gamma = settings.resolve(gamma, "gamma", StatisticKind::DEFAULT_GAMMA)?;
        let beta = settings.resolve(beta, "beta", BootstrapMethod::DEFAULT_BETA)?;
        Ok(StatParams {
            statistic: StatisticKind::from_cli(&statistic_name, alpha, gamma)?,
            statistic_name,
            metric: metric_name.parse()?,
            bootstrap: BootstrapMethod::from_cli(&bootstrap_name, beta)?,
            alpha,
            gamma,
            beta,
        })
    }
}

fn cmd_simulate(
    settings: &Settings,
    n: Option<usize>,
    t_points: Option<usize>,
    kernel: Option<String>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let timer = ManifestTimer::start("simulate");
    let n = settings.resolve(n, "n", 100)?;
    let t_points = settings.resolve(t_points, "t-points", 101)?;
    let kernel_name: String = settings.resolve(kernel, "kernel", "exponential:0.3".into())?;
    let kernel: GpKernel = kernel_name.parse()?;
    let seed = settings.resolve_seed(seed, 1)?;

    let spec = GpSpec::new(kernel, Grid::unit_interval(t_points)?, n);
    let sample = fdboot::simulate_gp(
        &spec,
        &RngStream::root(seed).substream(&[fdboot::roles::SIMULATION, 0, 0]),
    )?;
    write_dataset(out, &sample, &default_ids(n))?;

    timer.emit(
        json!({
            "n": n,
            "t_points": t_points,
            "kernel": kernel_name,
            "seed": seed,
        }),
        &[out.display().to_string()],
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_coverage(
    settings: &Settings,
    params: StatParams,
    n: Option<usize>,
    t_points: Option<usize>,
    kernel: Option<String>,
    b1: Option<usize>,
    b2: Option<usize>,
    replications: Option<usize>,
    levels: Option<String>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let timer = ManifestTimer::start("coverage");
    let n = settings.resolve(n, "n", 100)?;
    let t_points = settings.resolve(t_points, "t-points", 101)?;
    let kernel_name: String = settings.resolve(kernel, "kernel", "exponential:0.3".into())?;
    let b1 = settings.resolve(b1, "b1", ExperimentConfig::DEFAULT_B)?;
    let b2 = settings.resolve(b2, "b2", ExperimentConfig::DEFAULT_B)?;
    let replications =
        settings.resolve(replications, "replications", ExperimentConfig::DEFAULT_REPLICATIONS)?;
    let levels_raw: String = settings.resolve(levels, "levels", String::new())?;
    let nominal_levels = if levels_raw.is_empty() {
        ExperimentConfig::default_levels()
    } else {
        parse_levels(&levels_raw)?
    };
    let seed = settings.resolve_seed(seed, 1)?;

    let config = ExperimentConfig {
        gp: GpSpec::new(kernel_name.parse()?, Grid::unit_interval(t_points)?, n),
        statistic: params.statistic,
        metric: params.metric,
        bootstrap: params.bootstrap,
        b1,
        b2,
        replications,
        nominal_levels,
        seed,
    };
    let table = run_coverage_experiment(&config)?;

    write_coverage_csv(out, &table)?;
    let svg_path = out.with_extension("svg");
    write_text(&svg_path, &svg::coverage_plot(&table))?;

    timer.emit(
        json!({
            "statistic": params.statistic_name,
            "metric": params.metric.label(),
            "bootstrap": params.bootstrap.label(),
            "kernel": kernel_name,
            "n": n,
            "t_points": t_points,
            "b1": b1,
            "b2": b2,
            "replications": replications,
            "levels": config.nominal_levels,
            "alpha": params.alpha,
            "gamma": params.gamma,
            "beta": params.beta,
            "seed": seed,
        }),
        &[out.display().to_string(), svg_path.display().to_string()],
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_ci(
    settings: &Settings,
    input: &Path,
    params: StatParams,
    level: Option<f64>,
    b1: Option<usize>,
    b2: Option<usize>,
    seed: Option<u64>,
    out: &Path,
) -> CliResult<()> {
    let timer = ManifestTimer::start("ci");
    let level = settings.resolve(level, "level", 0.95)?;
    let b1 = settings.resolve(b1, "b1", ExperimentConfig::DEFAULT_B)?;
    let b2 = settings.resolve(b2, "b2", ExperimentConfig::DEFAULT_B)?;
    let seed = settings.resolve_seed(seed, 1)?;

    let data = read_dataset(input)?;
    let base = RngStream::root(seed);
    // Both bands share level-1 draws through the common base stream.
    let single = confidence_band(
        &data.sample,
        &params.statistic,
        params.metric,
        &params.bootstrap,
        level,
        b1,
        None,
        &base,
    )?;
    let double = confidence_band(
        &data.sample,
        &params.statistic,
        params.metric,
        &params.bootstrap,
        level,
        b1,
        Some(b2),
        &base,
    )?;

    write_band_csv(out, &single, &double)?;
    let svg_path = out.with_extension("svg");
    let title = format!(
        "{}% CI of the functional {} ({} bootstrap)",
        level * 100.0,
        params.statistic_name,
        params.bootstrap.label()
    );
    write_text(&svg_path, &svg::band_plot(&data.sample, &single, &double, &title))?;

    timer.emit(
        json!({
            "input": input.display().to_string(),
            "statistic": params.statistic_name,
            "metric": params.metric.label(),
            "bootstrap": params.bootstrap.label(),
            "level": level,
            "b1": b1,
            "b2": b2,
            "alpha": params.alpha,
            "gamma": params.gamma,
            "beta": params.beta,
            "seed": seed,
            "n": data.sample.n(),
            "t_points": data.sample.grid().len(),
            "cutoff_single": single.cutoff,
            "cutoff_double": double.cutoff,
            "degenerate_single": single.degenerate,
            "degenerate_double": double.degenerate,
        }),
        &[out.display().to_string(), svg_path.display().to_string()],
    );
    Ok(())
}

fn cmd_depth(
    settings: &Settings,
    input: &Path,
    method: Option<String>,
    alpha: Option<f64>,
    out: &Path,
) -> CliResult<()> {
    let timer = ManifestTimer::start("depth");
    let method_name: String = settings.resolve(method, "method", "fm".into())?;
    let alpha = settings.resolve(alpha, "alpha", DepthMethod::DEFAULT_ALPHA)?;
    let method = match method_name.to_ascii_lowercase().as_str() {
        "fm" => DepthMethod::FraimanMuniz,
        "radius" => DepthMethod::AlphaRadius { alpha },
        other => {
            return Err(CliError::Validation(format!(
                "unknown depth method {other:?}, expected \"fm\" or \"radius\""
            )))
        }
    };

    let data = read_dataset(input)?;
    let scores = depth_scores(&data.sample, method)?;
    let ranks = scores.ranks();

    let mut writer = csv_writer(out)?;
    write_record(&mut writer, &["curve_id", "score", "rank"])?;
    for (i, id) in data.curve_ids.iter().enumerate() {
        write_record(
            &mut writer,
            &[id.clone(), fmt_g17(scores.scores()[i]), (ranks[i] + 1).to_string()],
        )?;
    }
    flush(writer, out)?;

    timer.emit(
        json!({
            "input": input.display().to_string(),
            "method": method_name,
            "alpha": alpha,
            "n": data.sample.n(),
            "t_points": data.sample.grid().len(),
        }),
        &[out.display().to_string()],
    );
    Ok(())
}

fn parse_levels(raw: &str) -> CliResult<Vec<f64>> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("levels: cannot parse {part:?}")))
        })
        .collect()
}

fn write_coverage_csv(path: &Path, table: &CoverageTable) -> CliResult<()> {
    let mut writer = csv_writer(path)?;
    write_record(
        &mut writer,
        &[
            "statistic",
            "depth",
            "metric",
            "bootstrap",
            "method",
            "n",
            "b1",
            "b2",
            "r",
            "nominal",
            "empirical",
            "mc_stderr",
        ],
    )?;
    let meta = &table.meta;
    for row in &table.rows {
        write_record(
            &mut writer,
            &[
                meta.statistic.to_string(),
                meta.depth.to_string(),
                meta.metric.to_string(),
                meta.bootstrap.to_string(),
                row.method.label().to_string(),
                meta.n.to_string(),
                row.b1.to_string(),
                row.b2.to_string(),
                meta.replications.to_string(),
                row.nominal.to_string(),
                row.empirical.to_string(),
                row.mc_stderr.to_string(),
            ],
        )?;
    }
    flush(writer, path)
}

fn write_band_csv(
    path: &Path,
    single: &fdboot::ConfidenceBand,
    double: &fdboot::ConfidenceBand,
) -> CliResult<()> {
    let mut writer = csv_writer(path)?;
    write_record(
        &mut writer,
        &[
            "t",
            "estimate",
            "lower_single",
            "upper_single",
            "lower_double",
            "upper_double",
        ],
    )?;
    let grid = single.estimate.grid();
    for (j, &t) in grid.points().iter().enumerate() {
        write_record(
            &mut writer,
            &[
                fmt_g17(t),
                fmt_g17(single.estimate.values()[j]),
                fmt_g17(single.lower.values()[j]),
                fmt_g17(single.upper.values()[j]),
                fmt_g17(double.lower.values()[j]),
                fmt_g17(double.upper.values()[j]),
            ],
        )?;
    }
    flush(writer, path)
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| {
        CliError::Io(format!("writing {}: {e}", path.display()))
    })
}

fn write_record<W: std::io::Write, S: AsRef<[u8]>>(
    writer: &mut csv::Writer<W>,
    record: &[S],
) -> CliResult<()> {
    writer
        .write_record(record.iter().map(AsRef::as_ref))
        .map_err(|e| CliError::Io(format!("writing record: {e}")))
}

fn flush<W: std::io::Write>(mut writer: csv::Writer<W>, path: &Path) -> CliResult<()> {
    writer
        .flush()
        .map_err(|e| CliError::io(&format!("flushing {}", path.display()), e))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}
