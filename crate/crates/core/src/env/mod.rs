//! Episodic environments with two discrete actions.

pub mod cartpole;
pub mod chain;

pub use cartpole::{CartPole, CartPoleState, StepOutcome};
pub use chain::Chain;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Left = 0,
    Right = 1,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Left, Action::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        match index {
            0 => Some(Action::Left),
            1 => Some(Action::Right),
            _ => None,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Action::Left => Action::Right,
            Action::Right => Action::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("step called on a terminal state")]
    SteppedTerminal,
    #[error("chain needs at least 2 states, got {0}")]
    ChainTooShort(usize),
}

/// One transition as seen by a learner.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition<S> {
    pub next: S,
    pub reward: f64,
    /// The episode is over, for whatever reason.
    pub done: bool,
    /// The episode was cut off by a step limit rather than by reaching a
    /// terminal state. Implies `done`.
    pub truncated: bool,
}

impl<S> Transition<S> {
    /// True when the successor has no future value of its own.
    pub fn terminal(&self) -> bool {
        self.done && !self.truncated
    }
}

/// An episodic environment. `reset` may draw from the run's generator;
/// `step` is deterministic.
pub trait Environment {
    type State: Clone;

    fn reset(&mut self, rng: &mut Rng) -> Self::State;

    fn step(&mut self, action: Action) -> Result<Transition<Self::State>, EnvError>;
}
