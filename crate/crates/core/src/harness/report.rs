use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::runner::{run_experiment, Parallelism};
use crate::error::{Error, Result};
use crate::metrics::{
    aggregate_runs, solve_count, AggregateCurves, RunResult, SOLVE_BUDGET, SOLVE_THRESHOLD,
};

/// Reward of a full-length CartPole-v0 episode.
pub const MAX_EPISODE_REWARD: f64 = 200.0;

/// Outcome of one configuration across all its seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub label: String,
    pub runs: usize,
    pub solve_count: usize,
    /// `(seed, solved_at)` for every run.
    pub solved_at: Vec<(u64, Option<u32>)>,
    /// Mean solve episode among runs solved within the budget.
    pub mean_solve_episode: Option<f64>,
    /// `(seed, first episode with reward 200)` for every run.
    pub first_max_reward: Vec<(u64, Option<u32>)>,
    /// Mean of `first_max_reward` over runs that ever reach 200.
    pub mean_first_max_reward: Option<f64>,
    /// First episode at which the mean rolling-100 curve reaches 195.
    pub rolling_reaches_threshold_at: Option<u32>,
    pub curves: AggregateCurves,
}

impl ConfigSummary {
    pub fn from_runs(label: impl Into<String>, runs: &[RunResult], budget: u32) -> Result<Self> {
        let curves = aggregate_runs(runs)?;
        let solved: Vec<f64> = runs
            .iter()
            .filter_map(|r| r.solved_at.filter(|&e| e <= budget))
            .map(f64::from)
            .collect();
        let first_max_reward: Vec<(u64, Option<u32>)> = runs
            .iter()
            .map(|r| (r.seed, r.first_reaching(MAX_EPISODE_REWARD)))
            .collect();
        let reached: Vec<f64> = first_max_reward
            .iter()
            .filter_map(|(_, e)| e.map(f64::from))
            .collect();
        Ok(Self {
            label: label.into(),
            runs: runs.len(),
            solve_count: solve_count(runs, budget),
            solved_at: runs.iter().map(|r| (r.seed, r.solved_at)).collect(),
            mean_solve_episode: mean(&solved),
            first_max_reward,
            mean_first_max_reward: mean(&reached),
            rolling_reaches_threshold_at: curves.rolling_first_reaching(SOLVE_THRESHOLD),
            curves,
        })
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub budget: u32,
    pub a: ConfigSummary,
    pub b: ConfigSummary,
    /// `a.solve_count / b.solve_count`; 1 when both are zero, absent when
    /// only `b` is zero.
    pub solve_count_ratio: Option<f64>,
    /// Whether `a`'s runs reach reward 200 earlier on average than `b`'s.
    /// Absent when either side never reaches it.
    pub a_reaches_max_reward_first: Option<bool>,
}

impl ComparisonReport {
    pub fn summaries(&self) -> [&ConfigSummary; 2] {
        [&self.a, &self.b]
    }
}

/// Builds a report from already-computed runs.
pub fn compare_runs(
    label_a: &str,
    runs_a: &[RunResult],
    label_b: &str,
    runs_b: &[RunResult],
) -> Result<ComparisonReport> {
    let budget = SOLVE_BUDGET;
    let a = ConfigSummary::from_runs(label_a, runs_a, budget)?;
    let b = ConfigSummary::from_runs(label_b, runs_b, budget)?;
    let solve_count_ratio = match (a.solve_count, b.solve_count) {
        (0, 0) => Some(1.0),
        (_, 0) => None,
        (x, y) => Some(x as f64 / y as f64),
    };
    let a_reaches_max_reward_first = match (a.mean_first_max_reward, b.mean_first_max_reward) {
        (Some(x), Some(y)) => Some(x < y),
        _ => None,
    };
    Ok(ComparisonReport {
        budget,
        a,
        b,
        solve_count_ratio,
        a_reaches_max_reward_first,
    })
}

/// Runs both configurations on the same protocol and compares them.
/// Only the scheduler and agent settings may differ.
pub fn compare(
    config_a: &ExperimentConfig,
    config_b: &ExperimentConfig,
    parallelism: Parallelism,
) -> Result<(ComparisonReport, Vec<RunResult>, Vec<RunResult>)> {
    if config_a.episodes != config_b.episodes
        || config_a.seeds != config_b.seeds
        || config_a.environment != config_b.environment
        || config_a.chain_states != config_b.chain_states
    {
        return Err(Error::Config(
            "compared configs must share episodes, seeds and environment".into(),
        ));
    }
    let runs_a = run_experiment(config_a, parallelism)?;
    let runs_b = run_experiment(config_b, parallelism)?;
    let (label_a, label_b) = labels(config_a, config_b);
    let report = compare_runs(&label_a, &runs_a, &label_b, &runs_b)?;
    Ok((report, runs_a, runs_b))
}

/// Scheduler names, disambiguated when both sides use the same kind.
pub fn labels(a: &ExperimentConfig, b: &ExperimentConfig) -> (String, String) {
    let (la, lb) = (a.scheduler.label(), b.scheduler.label());
    if la == lb {
        (format!("{la}_a"), format!("{lb}_b"))
    } else {
        (la.to_owned(), lb.to_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::EpisodeRecord;

    fn run(seed: u64, rewards: &[f64]) -> RunResult {
        RunResult::new(
            seed,
            rewards
                .iter()
                .enumerate()
                .map(|(i, &r)| EpisodeRecord {
                    episode: i as u32 + 1,
                    total_reward: r,
                    epsilon: 0.0,
                    steps: r as u32,
                })
                .collect(),
        )
    }

    #[test]
    fn self_comparison_is_neutral() {
        let runs = vec![run(1, &[200.0; 150]), run(2, &[10.0; 150])];
        let r = compare_runs("x", &runs, "y", &runs).unwrap();
        assert_eq!(r.a.solve_count, 1);
        assert_eq!(r.solve_count_ratio, Some(1.0));
        assert_eq!(r.a_reaches_max_reward_first, Some(false));
        assert_eq!(r.a.curves, r.b.curves);
        assert_eq!(r.a.mean_solve_episode, Some(100.0));
        assert_eq!(r.a.mean_first_max_reward, Some(1.0));
    }

    #[test]
    fn ratio_cases() {
        let solved = vec![run(1, &[200.0; 100]), run(2, &[200.0; 100])];
        let one = vec![run(1, &[200.0; 100]), run(2, &[0.0; 100])];
        let none = vec![run(1, &[0.0; 100]), run(2, &[0.0; 100])];
        assert_eq!(
            compare_runs("a", &solved, "b", &one)
                .unwrap()
                .solve_count_ratio,
            Some(2.0)
        );
        assert_eq!(
            compare_runs("a", &solved, "b", &none)
                .unwrap()
                .solve_count_ratio,
            None
        );
        assert_eq!(
            compare_runs("a", &none, "b", &none)
                .unwrap()
                .solve_count_ratio,
            Some(1.0)
        );
        assert_eq!(
            compare_runs("a", &none, "b", &one)
                .unwrap()
                .solve_count_ratio,
            Some(0.0)
        );
    }

    #[test]
    fn mismatched_protocols_rejected() {
        let a = ExperimentConfig {
            episodes: 3,
            seeds: vec![1],
            ..Default::default()
        };
        let mut b = a.clone();
        b.episodes = 4;
        assert!(compare(&a, &b, Parallelism::Sequential).is_err());
        let mut b = a.clone();
        b.seeds = vec![2];
        assert!(compare(&a, &b, Parallelism::Sequential).is_err());
    }
}
