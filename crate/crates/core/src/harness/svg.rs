//! Minimal SVG line charts. Output depends only on the input data.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::report::{ComparisonReport, ConfigSummary};
use crate::error::{Error, Result};
use crate::metrics::SOLVE_THRESHOLD;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#d62728", "#7f7f7f", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
];

pub const REWARD_CHART: &str = "reward.svg";
pub const ROLLING_CHART: &str = "rolling100.svg";
pub const EPSILON_CHART: &str = "epsilon.svg";

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Renders one chart with a polyline per series and an optional dashed
/// horizontal reference line.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[ChartSeries],
    reference: Option<f64>,
) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max) = all().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.0), hi.max(p.0))
    });
    let (mut y_min, mut y_max) = all()
        .map(|p| p.1)
        .chain(reference)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| {
            (lo.min(y), hi.max(y))
        });
    if !x_min.is_finite() {
        (x_min, x_max) = (0.0, 1.0);
    }
    if !y_min.is_finite() {
        (y_min, y_max) = (0.0, 1.0);
    }
    y_min = y_min.min(0.0);
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        w,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        w,
        r#"<g class="axes" stroke="black" fill="none"><line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.1}"/></g>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h,
        TOP + plot_h
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(xv),
            TOP + plot_h + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            sy(yv) + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    if let Some(r) = reference {
        let _ = writeln!(
            w,
            r#"<line class="reference" x1="{LEFT}" y1="{y:.3}" x2="{:.1}" y2="{y:.3}" stroke="black" stroke-dasharray="6 4"/>"#,
            LEFT + plot_w,
            y = sy(r)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(&s.label),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn indexed(values: impl Iterator<Item = f64>) -> Vec<(f64, f64)> {
    values
        .enumerate()
        .map(|(i, v)| ((i + 1) as f64, v))
        .collect()
}

/// The three comparison charts: mean reward per episode, mean rolling-100
/// reward with the 195 line, and ε per episode.
pub fn charts(summaries: &[&ConfigSummary]) -> Result<[(&'static str, String); 3]> {
    if summaries.is_empty() || summaries.iter().any(|s| s.curves.is_empty()) {
        return Err(Error::Empty("nothing to plot"));
    }
    let series = |f: &dyn Fn(&ConfigSummary) -> Vec<(f64, f64)>| -> Vec<ChartSeries> {
        summaries
            .iter()
            .map(|s| ChartSeries {
                label: s.label.clone(),
                points: f(s),
            })
            .collect()
    };
    let reward = series(&|s| indexed(s.curves.mean_reward.iter().copied()));
    let rolling = series(&|s| {
        s.curves
            .mean_rolling
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|v| ((i + 1) as f64, v)))
            .collect()
    });
    let epsilon = series(&|s| indexed(s.curves.mean_epsilon.iter().copied()));
    Ok([
        (
            REWARD_CHART,
            line_chart(
                "Mean reward per episode",
                "episode",
                "reward",
                &reward,
                None,
            ),
        ),
        (
            ROLLING_CHART,
            line_chart(
                "Mean reward over last 100 episodes",
                "episode",
                "rolling-100 reward",
                &rolling,
                Some(SOLVE_THRESHOLD),
            ),
        ),
        (
            EPSILON_CHART,
            line_chart("Epsilon per episode", "episode", "epsilon", &epsilon, None),
        ),
    ])
}

/// Writes the charts for any number of summaries into `dir`.
pub fn emit_charts(summaries: &[&ConfigSummary], dir: &Path) -> Result<Vec<PathBuf>> {
    let charts = charts(summaries)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    charts
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

pub fn emit_svg(report: &ComparisonReport, dir: &Path) -> Result<Vec<PathBuf>> {
    emit_charts(&report.summaries(), dir)
}
