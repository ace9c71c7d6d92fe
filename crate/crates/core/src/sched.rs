//! Exploration-rate schedules.
//!
//! All schedules are advanced exactly once per episode, after the episode has
//! finished, with that episode's total reward.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reward-based ε decay: ε steps down by a fixed `change` only when an
/// episode's reward meets the current threshold, which then rises by
/// `reward_increment`.
///
/// ε and the threshold are derived from the number of triggering updates
/// rather than accumulated, so the ledger stays exact over long runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbedState {
    epsilon: f64,
    epsilon_start: f64,
    epsilon_min: f64,
    reward_threshold: f64,
    reward_threshold_init: f64,
    reward_increment: f64,
    change: f64,
    crossings: u64,
}

impl RbedState {
    /// `change = (epsilon_start - epsilon_min) / reward_target`, i.e. the
    /// number of decay steps equals the reward target.
    pub fn new(
        reward_target: f64,
        epsilon_start: f64,
        epsilon_min: f64,
        reward_increment: f64,
        reward_threshold_init: f64,
    ) -> Result<Self> {
        if !(reward_target > 0.0 && reward_target.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "reward_target must be > 0, got {reward_target}"
            )));
        }
        check_probability("epsilon_start", epsilon_start)?;
        check_probability("epsilon_min", epsilon_min)?;
        if epsilon_min > epsilon_start {
            return Err(Error::InvalidParameter(format!(
                "epsilon_min ({epsilon_min}) exceeds epsilon_start ({epsilon_start})"
            )));
        }
        if !(reward_increment > 0.0 && reward_increment.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "reward_increment must be > 0, got {reward_increment}"
            )));
        }
        if !reward_threshold_init.is_finite() {
            return Err(Error::InvalidParameter(
                "reward_threshold_init must be finite".into(),
            ));
        }
        Ok(Self {
            epsilon: epsilon_start,
            epsilon_start,
            epsilon_min,
            reward_threshold: reward_threshold_init,
            reward_threshold_init,
            reward_increment,
            change: (epsilon_start - epsilon_min) / reward_target,
            crossings: 0,
        })
    }

    /// Target 195, ε from 1 to 0, increment 1, threshold from 0.
    pub fn cartpole_v0() -> Self {
        Self::new(195.0, 1.0, 0.0, 1.0, 0.0).expect("valid constants")
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn epsilon_min(&self) -> f64 {
        self.epsilon_min
    }

    pub fn epsilon_start(&self) -> f64 {
        self.epsilon_start
    }

    pub fn reward_threshold(&self) -> f64 {
        self.reward_threshold
    }

    pub fn reward_increment(&self) -> f64 {
        self.reward_increment
    }

    pub fn change(&self) -> f64 {
        self.change
    }

    /// Number of updates whose reward met the threshold so far.
    pub fn crossings(&self) -> u64 {
        self.crossings
    }

    /// At most one decay per call, however far the reward exceeds the
    /// threshold.
    pub fn update(&mut self, last_reward: f64) {
        if last_reward >= self.reward_threshold {
            self.crossings += 1;
            let k = self.crossings as f64;
            self.epsilon = (self.epsilon_start - k * self.change).max(self.epsilon_min);
            self.reward_threshold = self.reward_threshold_init + k * self.reward_increment;
        }
    }
}

/// Multiplicative per-episode decay with a floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpState {
    epsilon: f64,
    decay_rate: f64,
    epsilon_min: f64,
}

impl ExpState {
    pub const DEFAULT_DECAY_RATE: f64 = 0.995;
    pub const DEFAULT_EPSILON_MIN: f64 = 0.01;

    pub fn new(epsilon_start: f64, decay_rate: f64, epsilon_min: f64) -> Result<Self> {
        check_probability("epsilon_start", epsilon_start)?;
        check_probability("epsilon_min", epsilon_min)?;
        if !(decay_rate > 0.0 && decay_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "decay_rate must lie in (0, 1), got {decay_rate}"
            )));
        }
        if epsilon_min > epsilon_start {
            return Err(Error::InvalidParameter(format!(
                "epsilon_min ({epsilon_min}) exceeds epsilon_start ({epsilon_start})"
            )));
        }
        Ok(Self {
            epsilon: epsilon_start,
            decay_rate,
            epsilon_min,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    pub fn epsilon_min(&self) -> f64 {
        self.epsilon_min
    }

    pub fn update(&mut self) {
        self.epsilon = (self.epsilon * self.decay_rate).max(self.epsilon_min);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scheduler {
    Rbed(RbedState),
    Exponential(ExpState),
    Constant { epsilon: f64 },
}

impl Scheduler {
    pub fn constant(epsilon: f64) -> Result<Self> {
        check_probability("epsilon", epsilon)?;
        Ok(Scheduler::Constant { epsilon })
    }

    /// The ε the policy should use for the next episode.
    pub fn epsilon(&self) -> f64 {
        match self {
            Scheduler::Rbed(s) => s.epsilon(),
            Scheduler::Exponential(s) => s.epsilon(),
            Scheduler::Constant { epsilon } => *epsilon,
        }
    }

    /// Episode-end update. The exponential schedule ignores the reward.
    pub fn update(&mut self, last_reward: f64) {
        match self {
            Scheduler::Rbed(s) => s.update(last_reward),
            Scheduler::Exponential(s) => s.update(),
            Scheduler::Constant { .. } => {}
        }
    }
}

fn check_probability(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {value}"
        )))
    }
}
