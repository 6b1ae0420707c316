//! Minimal self-contained SVG line plots.
//!
//! Output is a plain string assembled in a fixed order with fixed float
//! formatting, so plots are byte-reproducible.

use std::fmt::Write as _;

use fdboot::{CiMethod, ConfidenceBand, CoverageTable, FunctionalSample};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 52.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_L + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

struct Plot {
    body: String,
    frame: Frame,
}

impl Plot {
    fn new(frame: Frame, title: &str, x_label: &str, y_label: &str) -> Plot {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(body, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{:.1}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let _ = writeln!(
            body,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
            HEIGHT - 14.0,
            escape(x_label)
        );
        let _ = writeln!(
            body,
            r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            escape(y_label)
        );
        let _ = writeln!(
            body,
            r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        );
        Plot { body, frame }
    }

    fn axis_ticks(&mut self, x_ticks: &[f64], y_ticks: &[f64]) {
        for &t in x_ticks {
            let x = self.frame.x(t);
            let _ = writeln!(
                self.body,
                r#"<line x1="{x:.2}" y1="{:.1}" x2="{x:.2}" y2="{:.1}" stroke="black"/>"#,
                HEIGHT - MARGIN_B,
                HEIGHT - MARGIN_B + 5.0
            );
            let _ = writeln!(
                self.body,
                r#"<text x="{x:.2}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                HEIGHT - MARGIN_B + 18.0,
                tick_label(t)
            );
        }
        for &t in y_ticks {
            let y = self.frame.y(t);
            let _ = writeln!(
                self.body,
                r#"<line x1="{:.1}" y1="{y:.2}" x2="{MARGIN_L}" y2="{y:.2}" stroke="black"/>"#,
                MARGIN_L - 5.0
            );
            let _ = writeln!(
                self.body,
                r#"<text x="{:.1}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                MARGIN_L - 8.0,
                tick_label(t)
            );
        }
    }

    fn polyline(&mut self, xs: &[f64], ys: &[f64], style: &str) {
        let mut points = String::new();
        for (x, y) in xs.iter().zip(ys) {
            let _ = write!(points, "{:.2},{:.2} ", self.frame.x(*x), self.frame.y(*y));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" points="{}" {style}/>"#,
            points.trim_end()
        );
    }

    fn legend(&mut self, entries: &[(&str, &str)]) {
        let x = MARGIN_L + 12.0;
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = MARGIN_T + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                self.body,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/>"#,
                x + 22.0
            );
            let _ = writeln!(
                self.body,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" dominant-baseline="middle">{}</text>"#,
                x + 28.0,
                y,
                escape(label)
            );
        }
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Empirical vs nominal coverage with the identity reference line.
pub fn coverage_plot(table: &CoverageTable) -> String {
    let nominals: Vec<f64> = table
        .rows
        .iter()
        .filter(|r| r.method == CiMethod::Single)
        .map(|r| r.nominal)
        .collect();
    let pick = |method: CiMethod| -> Vec<f64> {
        table
            .rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.empirical)
            .collect()
    };
    let singles = pick(CiMethod::Single);
    let doubles = pick(CiMethod::Double);

    let x_min = nominals.first().copied().unwrap_or(0.0) - 0.05;
    let x_max = nominals.last().copied().unwrap_or(1.0) + 0.05;
    let frame = Frame {
        x_min,
        x_max,
        y_min: 0.0,
        y_max: 1.0,
    };
    let title = format!(
        "{} / {} / {} bootstrap, n={}, R={}",
        table.meta.statistic, table.meta.metric, table.meta.bootstrap, table.meta.n,
        table.meta.replications
    );
    let mut plot = Plot::new(frame, &title, "nominal coverage", "empirical coverage");
    let y_ticks: Vec<f64> = (0..=5).map(|i| i as f64 * 0.2).collect();
    plot.axis_ticks(&nominals, &y_ticks);

    // Identity line: exact calibration.
    plot.polyline(
        &[x_min, x_max],
        &[x_min.max(0.0), x_max.min(1.0)],
        r#"stroke="gray" stroke-dasharray="4 3" stroke-width="1""#,
    );
    plot.polyline(&nominals, &singles, r##"stroke="#d62728" stroke-width="2""##);
    plot.polyline(&nominals, &doubles, r##"stroke="#1f77b4" stroke-width="2""##);
    plot.legend(&[
        ("single bootstrap", "#d62728"),
        ("double bootstrap", "#1f77b4"),
        ("nominal", "gray"),
    ]);
    plot.finish()
}

/// Sample curves with the estimate and both confidence bands overlaid.
pub fn band_plot(
    sample: &FunctionalSample,
    single: &ConfidenceBand,
    double: &ConfidenceBand,
    title: &str,
) -> String {
    let pts = sample.grid().points();
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    let mut scan = |values: &[f64]| {
        for &v in values {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    };
    for row in sample.rows() {
        scan(row);
    }
    scan(single.lower.values());
    scan(single.upper.values());
    scan(double.lower.values());
    scan(double.upper.values());
    let pad = ((y_max - y_min) * 0.05).max(1e-9);

    let frame = Frame {
        x_min: pts[0],
        x_max: pts[pts.len() - 1],
        y_min: y_min - pad,
        y_max: y_max + pad,
    };
    let mut plot = Plot::new(frame, title, "t", "value");
    let x_ticks: Vec<f64> = (0..=4)
        .map(|i| pts[0] + (pts[pts.len() - 1] - pts[0]) * i as f64 / 4.0)
        .collect();
    let y_ticks: Vec<f64> = (0..=4)
        .map(|i| y_min + (y_max - y_min) * i as f64 / 4.0)
        .collect();
    plot.axis_ticks(&x_ticks, &y_ticks);

    for row in sample.rows() {
        plot.polyline(pts, row, r##"stroke="#cccccc" stroke-width="0.6""##);
    }
    let single_style = r##"stroke="#d62728" stroke-width="1.6""##;
    let double_style = r##"stroke="#1f77b4" stroke-width="1.6" stroke-dasharray="5 3""##;
    plot.polyline(pts, single.lower.values(), single_style);
    plot.polyline(pts, single.upper.values(), single_style);
    plot.polyline(pts, double.lower.values(), double_style);
    plot.polyline(pts, double.upper.values(), double_style);
    plot.polyline(
        pts,
        single.estimate.values(),
        r#"stroke="black" stroke-width="2""#,
    );
    plot.legend(&[
        ("estimate", "black"),
        ("single bootstrap CI", "#d62728"),
        ("double bootstrap CI", "#1f77b4"),
    ]);
    plot.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fdboot::{
        confidence_band, BootstrapMethod, ExperimentConfig, Grid, GpSpec, MetricKind, RngStream,
        StatisticKind,
    };

    fn sample() -> FunctionalSample {
        let grid = Grid::unit_interval(9).unwrap();
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..9).map(|j| (i as f64 - 2.5) * 0.3 + j as f64 * 0.1).collect())
            .collect();
        FunctionalSample::build(grid, &rows).unwrap()
    }

    #[test]
    fn coverage_plot_is_deterministic_svg() {
        let config = ExperimentConfig {
            gp: GpSpec::exponential_unit(10, 11).unwrap(),
            statistic: StatisticKind::Mean,
            metric: MetricKind::L2,
            bootstrap: BootstrapMethod::Plain,
            b1: 9,
            b2: 4,
            replications: 5,
            nominal_levels: ExperimentConfig::default_levels(),
            seed: 3,
        };
        let table = fdboot::run_coverage_experiment(&config).unwrap();
        let a = coverage_plot(&table);
        let b = coverage_plot(&table);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<polyline").count(), 3);
    }

    #[test]
    fn band_plot_renders_all_layers() {
        let s = sample();
        let base = RngStream::root(5);
        let single = confidence_band(
            &s,
            &StatisticKind::Mean,
            MetricKind::L2,
            &BootstrapMethod::Plain,
            0.9,
            19,
            None,
            &base,
        )
        .unwrap();
        let double = confidence_band(
            &s,
            &StatisticKind::Mean,
            MetricKind::L2,
            &BootstrapMethod::Plain,
            0.9,
            19,
            Some(5),
            &base,
        )
        .unwrap();
        let svg = band_plot(&s, &single, &double, "demo");
        // 6 sample curves + 4 band edges + 1 estimate
        assert_eq!(svg.matches("<polyline").count(), 11);
    }
}
