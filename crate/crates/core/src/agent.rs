//! ε-greedy tabular Q-learning.

use serde::{Deserialize, Serialize};

use crate::env::{Action, CartPoleState, Environment};
use crate::error::{Error, Result};
use crate::metrics::EpisodeRecord;
use crate::rng::Rng;

/// Maps an environment state onto a row of the Q-table.
pub trait StateEncoder<S> {
    fn n_states(&self) -> usize;
    fn encode(&self, state: &S) -> usize;
}

/// Uniform bucketing of the four CartPole coordinates. Values outside a
/// dimension's range fall into its edge bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Discretizer {
    /// Bucket counts for x, x_dot, theta, theta_dot.
    pub buckets: [usize; 4],
    /// Clip ranges `[lo, hi]` for the same coordinates.
    pub bounds: [[f64; 2]; 4],
}

impl Default for Discretizer {
    fn default() -> Self {
        // cart position and velocity are ignored; the pole alone carries
        // enough signal for a 200-step balance
        Self {
            buckets: [1, 1, 7, 10],
            bounds: [[-2.4, 2.4], [-3.0, 3.0], [-0.2095, 0.2095], [-1.5, 1.5]],
        }
    }
}

impl Discretizer {
    pub fn validate(&self) -> Result<()> {
        for (i, (&n, &[lo, hi])) in self.buckets.iter().zip(&self.bounds).enumerate() {
            if n == 0 {
                return Err(Error::InvalidParameter(format!(
                    "bucket count for dimension {i} must be >= 1"
                )));
            }
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "clip range for dimension {i} must satisfy lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    pub fn bucket(&self, dim: usize, value: f64) -> usize {
        let n = self.buckets[dim];
        let [lo, hi] = self.bounds[dim];
        let scaled = (value - lo) / (hi - lo) * n as f64;
        // NaN casts to 0; out-of-range values saturate
        (scaled.max(0.0) as usize).min(n - 1)
    }

    pub fn buckets_of(&self, s: &CartPoleState) -> [usize; 4] {
        [
            self.bucket(0, s.x),
            self.bucket(1, s.x_dot),
            self.bucket(2, s.theta),
            self.bucket(3, s.theta_dot),
        ]
    }

    /// Row-major flattening of a bucket tuple.
    pub fn flatten(&self, tuple: [usize; 4]) -> usize {
        tuple
            .iter()
            .zip(&self.buckets)
            .fold(0, |acc, (&b, &n)| acc * n + b)
    }

    pub fn unflatten(&self, mut index: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for d in (0..4).rev() {
            out[d] = index % self.buckets[d];
            index /= self.buckets[d];
        }
        out
    }
}

impl StateEncoder<CartPoleState> for Discretizer {
    fn n_states(&self) -> usize {
        self.buckets.iter().product()
    }

    fn encode(&self, state: &CartPoleState) -> usize {
        self.flatten(self.buckets_of(state))
    }
}

/// Identity encoding for environments whose state already is an index.
#[derive(Debug, Clone, Copy)]
pub struct IndexEncoder(pub usize);

impl StateEncoder<usize> for IndexEncoder {
    fn n_states(&self) -> usize {
        self.0
    }

    fn encode(&self, state: &usize) -> usize {
        *state
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentParams {
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for AgentParams {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            gamma: 1.0,
        }
    }
}

impl AgentParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Dense action-value table, one `[left, right]` row per encoded state.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    rows: Vec<[f64; 2]>,
}

impl QTable {
    pub fn new(n_states: usize) -> Self {
        Self {
            rows: vec![[0.0; 2]; n_states],
        }
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, s: usize, a: Action) -> f64 {
        self.rows[s][a.index()]
    }

    pub fn set(&mut self, s: usize, a: Action, value: f64) {
        self.rows[s][a.index()] = value;
    }

    pub fn row(&self, s: usize) -> [f64; 2] {
        self.rows[s]
    }

    pub fn max_value(&self, s: usize) -> f64 {
        let [l, r] = self.rows[s];
        l.max(r)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().flatten().copied()
    }

    /// ε-greedy choice.
    ///
    /// RNG call order is fixed: one `next_f64` for the explore test, then
    /// either one `next_int_below(2)` for the random action or, only when
    /// both values tie, one `next_int_below(2)` for the tie-break.
    pub fn select_action(&self, s: usize, epsilon: f64, rng: &mut Rng) -> Action {
        let u = rng.next_f64();
        if u < epsilon {
            return random_action(rng);
        }
        let [l, r] = self.rows[s];
        if l > r {
            Action::Left
        } else if r > l {
            Action::Right
        } else {
            random_action(rng)
        }
    }

    /// One-step Q-learning backup; terminal transitions do not bootstrap.
    pub fn update(
        &mut self,
        s: usize,
        a: Action,
        reward: f64,
        s_next: usize,
        terminal: bool,
        params: &AgentParams,
    ) {
        let bootstrap = if terminal {
            0.0
        } else {
            self.max_value(s_next)
        };
        let target = reward + params.gamma * bootstrap;
        let q = &mut self.rows[s][a.index()];
        *q += params.alpha * (target - *q);
    }
}

fn random_action(rng: &mut Rng) -> Action {
    let i = rng.next_int_below(2).expect("n = 2") as usize;
    Action::from_index(i).expect("index < 2")
}

/// Learner: a Q-table plus the encoder that indexes it.
#[derive(Debug, Clone)]
pub struct Agent<E> {
    pub q: QTable,
    pub encoder: E,
    pub params: AgentParams,
}

impl<E> Agent<E> {
    pub fn new<S>(encoder: E, params: AgentParams) -> Self
    where
        E: StateEncoder<S>,
    {
        Self {
            q: QTable::new(encoder.n_states()),
            encoder,
            params,
        }
    }

    /// Plays one learning episode with ε held fixed. `episode` is the 1-based
    /// index stamped on the returned record.
    pub fn run_episode<Env>(
        &mut self,
        env: &mut Env,
        episode: u32,
        epsilon: f64,
        rng: &mut Rng,
    ) -> Result<EpisodeRecord>
    where
        Env: Environment,
        E: StateEncoder<Env::State>,
    {
        let mut s = self.encoder.encode(&env.reset(rng));
        let mut total_reward = 0.0;
        let mut steps = 0u32;
        loop {
            let action = self.q.select_action(s, epsilon, rng);
            let tr = env.step(action)?;
            let s_next = self.encoder.encode(&tr.next);
            // a time-limit cut still bootstraps from the successor
            self.q
                .update(s, action, tr.reward, s_next, tr.terminal(), &self.params);
            total_reward += tr.reward;
            steps += 1;
            if tr.done {
                break;
            }
            s = s_next;
        }
        Ok(EpisodeRecord {
            episode,
            total_reward,
            epsilon,
            steps,
        })
    }
}
