//! Episode series analytics: rolling means, the CartPole-v0 solved
//! criterion, and cross-run aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SOLVE_THRESHOLD: f64 = 195.0;
pub const SOLVE_WINDOW: usize = 100;
pub const SOLVE_BUDGET: u32 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    /// 1-based.
    pub episode: u32,
    pub total_reward: f64,
    /// ε in force for the whole episode.
    pub epsilon: f64,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub records: Vec<EpisodeRecord>,
    pub solved_at: Option<u32>,
}

impl RunResult {
    pub fn new(seed: u64, records: Vec<EpisodeRecord>) -> Self {
        let solved_at = solved_at(&records, SOLVE_THRESHOLD, SOLVE_WINDOW);
        Self {
            seed,
            records,
            solved_at,
        }
    }

    pub fn rewards(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.total_reward).collect()
    }

    /// First episode whose reward reached `level`.
    pub fn first_reaching(&self, level: f64) -> Option<u32> {
        self.records
            .iter()
            .find(|r| r.total_reward >= level)
            .map(|r| r.episode)
    }
}

/// Trailing-window means. Entry `i` covers `series[i ..= i + window - 1]`,
/// so the output starts at the first full window and has
/// `len - window + 1` entries (none if the series is shorter).
pub fn rolling_mean(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::InvalidParameter("window must be >= 1".into()));
    }
    if series.len() < window {
        return Ok(Vec::new());
    }
    let w = window as f64;
    let mut out = Vec::with_capacity(series.len() - window + 1);
    // Neumaier-compensated running sum
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let add = |sum: &mut f64, comp: &mut f64, v: f64| {
        let t = *sum + v;
        if sum.abs() >= v.abs() {
            *comp += (*sum - t) + v;
        } else {
            *comp += (v - t) + *sum;
        }
        *sum = t;
    };
    for &v in &series[..window] {
        add(&mut sum, &mut comp, v);
    }
    out.push((sum + comp) / w);
    for i in window..series.len() {
        add(&mut sum, &mut comp, series[i]);
        add(&mut sum, &mut comp, -series[i - window]);
        out.push((sum + comp) / w);
    }
    Ok(out)
}

/// Smallest 1-based episode `e >= window` whose trailing `window` rewards
/// average at least `threshold`.
pub fn solved_at(records: &[EpisodeRecord], threshold: f64, window: usize) -> Option<u32> {
    let rewards: Vec<f64> = records.iter().map(|r| r.total_reward).collect();
    let means = rolling_mean(&rewards, window).ok()?;
    means
        .iter()
        .position(|&m| m >= threshold)
        .map(|i| records[i + window - 1].episode)
}

/// Number of runs solved no later than episode `budget`.
pub fn solve_count(runs: &[RunResult], budget: u32) -> usize {
    runs.iter()
        .filter(|r| r.solved_at.is_some_and(|e| e <= budget))
        .count()
}

/// Per-episode means across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateCurves {
    pub mean_reward: Vec<f64>,
    /// Mean over runs of each run's trailing-100 average; `None` before the
    /// first full window.
    pub mean_rolling: Vec<Option<f64>>,
    pub mean_epsilon: Vec<f64>,
}

impl AggregateCurves {
    pub fn len(&self) -> usize {
        self.mean_reward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean_reward.is_empty()
    }

    /// First 1-based episode at which the mean rolling curve reaches `level`.
    pub fn rolling_first_reaching(&self, level: f64) -> Option<u32> {
        self.mean_rolling
            .iter()
            .position(|m| m.is_some_and(|v| v >= level))
            .map(|i| i as u32 + 1)
    }
}

/// Rolling averages are taken per run first and then averaged across runs.
/// Runs are summed in ascending-seed order so the result does not depend on
/// the order they are passed in.
pub fn aggregate_runs(runs: &[RunResult]) -> Result<AggregateCurves> {
    let first = runs.first().ok_or(Error::Empty("no runs to aggregate"))?;
    let len = first.records.len();
    if let Some(bad) = runs.iter().find(|r| r.records.len() != len) {
        return Err(Error::UnequalRuns {
            expected: len,
            found: bad.records.len(),
        });
    }
    let mut ordered: Vec<&RunResult> = runs.iter().collect();
    ordered.sort_by(|a, b| {
        a.seed
            .cmp(&b.seed)
            .then_with(|| cmp_series(&a.records, &b.records))
    });

    let n = runs.len() as f64;
    let mut reward = vec![0.0; len];
    let mut epsilon = vec![0.0; len];
    let mut rolling = vec![0.0; len];
    for run in &ordered {
        for (i, rec) in run.records.iter().enumerate() {
            reward[i] += rec.total_reward;
            epsilon[i] += rec.epsilon;
        }
        let roll = rolling_mean(&run.rewards(), SOLVE_WINDOW)?;
        for (j, m) in roll.into_iter().enumerate() {
            rolling[j + SOLVE_WINDOW - 1] += m;
        }
    }
    Ok(AggregateCurves {
        mean_reward: reward.into_iter().map(|v| v / n).collect(),
        mean_rolling: rolling
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i + 1 >= SOLVE_WINDOW).then_some(v / n))
            .collect(),
        mean_epsilon: epsilon.into_iter().map(|v| v / n).collect(),
    })
}

fn cmp_series(a: &[EpisodeRecord], b: &[EpisodeRecord]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.total_reward
                .total_cmp(&y.total_reward)
                .then(x.epsilon.total_cmp(&y.epsilon))
        })
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
