use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rbed::harness::{
    self, compare, emit_charts, emit_csv, emit_svg, labels, parse_seeds, read_run_csv,
    run_experiment, ConfigSummary, ExperimentConfig, Parallelism,
};
use rbed::metrics::{solve_count, RunResult, SOLVE_BUDGET};
use rbed::{Error, Result};

#[derive(Parser)]
#[command(
    name = "rbed",
    version,
    about = "Reward-based vs exponential epsilon decay on CartPole-v0"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Overrides {
    /// Seed range such as `1..20` (inclusive) or a list `1,5,9`.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    episodes: Option<u32>,
    /// Concurrent runs; defaults to the number of processors.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration over all its seeds.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run two configurations on the same seeds and compare them.
    Compare {
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long)]
        config_b: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Draw charts from CSV output of `run` or `compare`.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = &overrides.seeds {
        cfg.seeds = parse_seeds(s)?;
    }
    if let Some(e) = overrides.episodes {
        cfg.episodes = e;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Loads every `run_seed<N>.csv` in `dir`, ordered by seed.
fn read_runs(dir: &Path) -> Result<Vec<RunResult>> {
    let io = |source| Error::Io {
        path: dir.to_owned(),
        source,
    };
    let mut runs = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let is_run = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("run_seed") && n.ends_with(".csv"));
        if is_run {
            runs.push(read_run_csv(&path)?);
        }
    }
    runs.sort_by_key(|r| r.seed);
    Ok(runs)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            overrides,
        } => {
            let cfg = load(config.as_deref(), &overrides)?;
            let runs = run_experiment(&cfg, Parallelism::from_jobs(overrides.jobs))?;
            emit_csv(&runs, &out)?;
            write_json(&out.join("config.json"), &cfg)?;
            let summary = ConfigSummary::from_runs(cfg.scheduler.label(), &runs, SOLVE_BUDGET)?;
            emit_charts(&[&summary], &out)?;
            println!(
                "{}: solved {}/{} within {} episodes",
                summary.label,
                solve_count(&runs, SOLVE_BUDGET),
                runs.len(),
                SOLVE_BUDGET
            );
        }
        Command::Compare {
            config_a,
            config_b,
            out,
            overrides,
        } => {
            let a = load(Some(&config_a), &overrides)?;
            let b = load(Some(&config_b), &overrides)?;
            let (report, runs_a, runs_b) = compare(&a, &b, Parallelism::from_jobs(overrides.jobs))?;
            let (label_a, label_b) = labels(&a, &b);
            emit_csv(&runs_a, &out.join(&label_a))?;
            emit_csv(&runs_b, &out.join(&label_b))?;
            write_json(&out.join(&label_a).join("config.json"), &a)?;
            write_json(&out.join(&label_b).join("config.json"), &b)?;
            write_json(&out.join("report.json"), &report)?;
            emit_svg(&report, &out)?;
            for s in report.summaries() {
                println!(
                    "{}: solved {}/{} within {} episodes, mean solve episode {}",
                    s.label,
                    s.solve_count,
                    s.runs,
                    report.budget,
                    s.mean_solve_episode
                        .map_or("-".to_owned(), |e| format!("{e:.1}"))
                );
            }
            match report.solve_count_ratio {
                Some(r) => println!("solve-count ratio {label_a}/{label_b}: {r:.3}"),
                None => println!(
                    "solve-count ratio {label_a}/{label_b}: unbounded ({label_b} solved none)"
                ),
            }
        }
        Command::Plot { input, out } => {
            let mut summaries = Vec::new();
            let own = read_runs(&input)?;
            if !own.is_empty() {
                let label = input
                    .file_name()
                    .and_then(|n| n.to_str())
                    .unwrap_or("run")
                    .to_owned();
                summaries.push(ConfigSummary::from_runs(label, &own, SOLVE_BUDGET)?);
            }
            let mut subdirs: Vec<PathBuf> = std::fs::read_dir(&input)
                .map_err(|source| Error::Io {
                    path: input.clone(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_dir())
                .collect();
            // a compare directory keeps its a/b order
            let order = report_labels(&input.join("report.json"));
            subdirs.sort_by_key(|p| {
                let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                let rank = order.iter().position(|l| l == name).unwrap_or(order.len());
                (rank, p.clone())
            });
            for dir in subdirs {
                let runs = read_runs(&dir)?;
                if runs.is_empty() {
                    continue;
                }
                let label = dir
                    .file_name()
                    .and_then(|n| n.to_str())
                    .unwrap_or("run")
                    .to_owned();
                summaries.push(ConfigSummary::from_runs(label, &runs, SOLVE_BUDGET)?);
            }
            let refs: Vec<&ConfigSummary> = summaries.iter().collect();
            for path in harness::emit_charts(&refs, &out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn report_labels(path: &Path) -> Vec<String> {
    let Ok(bytes) = std::fs::read(path) else {
        return Vec::new();
    };
    let Ok(report) = serde_json::from_slice::<serde_json::Value>(&bytes) else {
        return Vec::new();
    };
    ["a", "b"]
        .iter()
        .filter_map(|side| report[side]["label"].as_str().map(str::to_owned))
        .collect()
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
