//! Experiment configuration, multi-seed execution and result emitters.

mod config;
mod csv;
mod report;
mod runner;
mod svg;

pub use config::{parse_seeds, AgentConfig, EnvironmentKind, ExperimentConfig, SchedulerConfig};
pub use csv::{aggregate_csv, emit_csv, read_run_csv, run_csv, run_file_name, AGGREGATE_FILE};
pub use report::{
    compare, compare_runs, labels, ComparisonReport, ConfigSummary, MAX_EPISODE_REWARD,
};
pub use runner::{run_experiment, run_seed, Parallelism};
pub use svg::{
    charts, emit_charts, emit_svg, line_chart, ChartSeries, EPSILON_CHART, REWARD_CHART,
    ROLLING_CHART,
};
