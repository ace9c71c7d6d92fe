use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agent::{AgentParams, Discretizer};
use crate::env::chain;
use crate::error::{Error, Result};
use crate::metrics::SOLVE_BUDGET;
use crate::sched::{ExpState, RbedState, Scheduler};

/// Declarative ε schedule. Missing fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchedulerConfig {
    Rbed {
        #[serde(default = "one")]
        epsilon_start: f64,
        #[serde(default)]
        epsilon_min: f64,
        #[serde(default = "default_reward_target")]
        reward_target: f64,
        #[serde(default = "one")]
        reward_increment: f64,
        #[serde(default)]
        reward_threshold_init: f64,
    },
    Exponential {
        #[serde(default = "one")]
        epsilon_start: f64,
        #[serde(default = "default_decay_rate")]
        decay_rate: f64,
        #[serde(default = "default_exp_floor")]
        epsilon_min: f64,
    },
    Constant {
        epsilon: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn default_reward_target() -> f64 {
    195.0
}

fn default_decay_rate() -> f64 {
    ExpState::DEFAULT_DECAY_RATE
}

fn default_exp_floor() -> f64 {
    ExpState::DEFAULT_EPSILON_MIN
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self::rbed()
    }
}

impl SchedulerConfig {
    pub fn rbed() -> Self {
        SchedulerConfig::Rbed {
            epsilon_start: 1.0,
            epsilon_min: 0.0,
            reward_target: default_reward_target(),
            reward_increment: 1.0,
            reward_threshold_init: 0.0,
        }
    }

    pub fn exponential() -> Self {
        SchedulerConfig::Exponential {
            epsilon_start: 1.0,
            decay_rate: default_decay_rate(),
            epsilon_min: default_exp_floor(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SchedulerConfig::Rbed { .. } => "rbed",
            SchedulerConfig::Exponential { .. } => "exponential",
            SchedulerConfig::Constant { .. } => "constant",
        }
    }

    pub fn build(&self) -> Result<Scheduler> {
        Ok(match *self {
            SchedulerConfig::Rbed {
                epsilon_start,
                epsilon_min,
                reward_target,
                reward_increment,
                reward_threshold_init,
            } => Scheduler::Rbed(RbedState::new(
                reward_target,
                epsilon_start,
                epsilon_min,
                reward_increment,
                reward_threshold_init,
            )?),
            SchedulerConfig::Exponential {
                epsilon_start,
                decay_rate,
                epsilon_min,
            } => Scheduler::Exponential(ExpState::new(epsilon_start, decay_rate, epsilon_min)?),
            SchedulerConfig::Constant { epsilon } => Scheduler::constant(epsilon)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub alpha: f64,
    pub gamma: f64,
    /// Bucket counts for x, x_dot, theta, theta_dot.
    pub buckets: [usize; 4],
    /// `[lo, hi]` clip ranges for the same coordinates.
    pub clip: [[f64; 2]; 4],
}

impl Default for AgentConfig {
    fn default() -> Self {
        let params = AgentParams::default();
        let grid = Discretizer::default();
        Self {
            alpha: params.alpha,
            gamma: params.gamma,
            buckets: grid.buckets,
            clip: grid.bounds,
        }
    }
}

impl AgentConfig {
    pub fn params(&self) -> AgentParams {
        AgentParams {
            alpha: self.alpha,
            gamma: self.gamma,
        }
    }

    pub fn discretizer(&self) -> Discretizer {
        Discretizer {
            buckets: self.buckets,
            bounds: self.clip,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvironmentKind {
    #[default]
    Cartpole,
    Chain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheduler: SchedulerConfig,
    pub agent: AgentConfig,
    pub episodes: u32,
    pub seeds: Vec<u64>,
    pub environment: EnvironmentKind,
    /// Only read when `environment` is `chain`.
    pub chain_states: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scheduler: SchedulerConfig::default(),
            agent: AgentConfig::default(),
            episodes: SOLVE_BUDGET,
            seeds: (1..=20).collect(),
            environment: EnvironmentKind::default(),
            chain_states: chain::DEFAULT_STATES,
        }
    }
}

impl ExperimentConfig {
    pub fn with_scheduler(scheduler: SchedulerConfig) -> Self {
        Self {
            scheduler,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::Config("episodes must be >= 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("seeds must be distinct".into()));
        }
        if self.environment == EnvironmentKind::Chain && self.chain_states < 2 {
            return Err(Error::Config("chain_states must be >= 2".into()));
        }
        self.scheduler.build()?;
        self.agent.params().validate()?;
        self.agent.discretizer().validate()?;
        Ok(())
    }
}

/// Parses `a..b` (inclusive), `a..=b`, or a comma-separated list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("cannot parse seeds from {text:?}"));
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}
