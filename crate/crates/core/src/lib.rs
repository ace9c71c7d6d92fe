//! Reward-based ε decay (RBED) and exponential ε decay for ε-greedy
//! Q-learning, with a deterministic CartPole-v0 benchmark harness.
//!
//! RBED lowers ε by a fixed step only after an episode's reward meets a
//! threshold, and raises the threshold each time it does. Exponential decay
//! multiplies ε by a constant rate every episode.

pub mod agent;
pub mod env;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod sched;

pub use error::{Error, Result};
