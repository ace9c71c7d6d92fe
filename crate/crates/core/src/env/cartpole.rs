//! CartPole-v0: a pole hinged on a cart moving along a frictionless track.
//!
//! Constants, integration order and termination rules follow the classic-control
//! implementation used by Gym: semi-implicit Euler with the derivatives from
//! the pre-step state, +1 reward for every executed step, and a hard cap of
//! 200 steps.

use super::{Action, EnvError, Environment, Transition};
use crate::rng::Rng;

pub const GRAVITY: f64 = 9.8;
pub const MASS_CART: f64 = 1.0;
pub const MASS_POLE: f64 = 0.1;
pub const TOTAL_MASS: f64 = MASS_CART + MASS_POLE;
/// Half the pole length.
pub const POLE_HALF_LENGTH: f64 = 0.5;
pub const POLE_MASS_LENGTH: f64 = MASS_POLE * POLE_HALF_LENGTH;
pub const FORCE_MAG: f64 = 10.0;
pub const TAU: f64 = 0.02;
/// 12 degrees.
pub const THETA_THRESHOLD: f64 = 12.0 * 2.0 * std::f64::consts::PI / 360.0;
pub const X_THRESHOLD: f64 = 2.4;
pub const MAX_STEPS: u32 = 200;
pub const RESET_BOUND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartPoleState {
    pub x: f64,
    pub x_dot: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub steps_elapsed: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub next_state: CartPoleState,
    pub reward: f64,
    pub done: bool,
    /// Ended only by the 200-step cap.
    pub truncated: bool,
}

impl CartPoleState {
    pub fn new(x: f64, x_dot: f64, theta: f64, theta_dot: f64) -> Self {
        Self {
            x,
            x_dot,
            theta,
            theta_dot,
            steps_elapsed: 0,
        }
    }

    /// Draws x, x_dot, theta, theta_dot (in that order) uniformly from
    /// `[-0.05, 0.05)`.
    pub fn reset(rng: &mut Rng) -> Self {
        let x = rng.uniform(-RESET_BOUND, RESET_BOUND);
        let x_dot = rng.uniform(-RESET_BOUND, RESET_BOUND);
        let theta = rng.uniform(-RESET_BOUND, RESET_BOUND);
        let theta_dot = rng.uniform(-RESET_BOUND, RESET_BOUND);
        Self::new(x, x_dot, theta, theta_dot)
    }

    pub fn out_of_bounds(&self) -> bool {
        self.x.abs() > X_THRESHOLD || self.theta.abs() > THETA_THRESHOLD
    }

    pub fn is_terminal(&self) -> bool {
        self.out_of_bounds() || self.steps_elapsed >= MAX_STEPS
    }

    /// Sign-flipped state: the physics is symmetric under this map combined
    /// with swapping the actions.
    pub fn mirrored(&self) -> Self {
        Self {
            x: -self.x,
            x_dot: -self.x_dot,
            theta: -self.theta,
            theta_dot: -self.theta_dot,
            steps_elapsed: self.steps_elapsed,
        }
    }

    pub fn step(&self, action: Action) -> Result<StepOutcome, EnvError> {
        let force = match action {
            Action::Left => -FORCE_MAG,
            Action::Right => FORCE_MAG,
        };
        self.step_with_force(force)
    }

    /// Advances one tick under an arbitrary horizontal force.
    pub fn step_with_force(&self, force: f64) -> Result<StepOutcome, EnvError> {
        if self.is_terminal() {
            return Err(EnvError::SteppedTerminal);
        }
        let (sin, cos) = self.theta.sin_cos();
        let temp = (force + POLE_MASS_LENGTH * self.theta_dot * self.theta_dot * sin) / TOTAL_MASS;
        let theta_acc = (GRAVITY * sin - cos * temp)
            / (POLE_HALF_LENGTH * (4.0 / 3.0 - MASS_POLE * cos * cos / TOTAL_MASS));
        let x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos / TOTAL_MASS;

        let next_state = CartPoleState {
            x: self.x + TAU * self.x_dot,
            x_dot: self.x_dot + TAU * x_acc,
            theta: self.theta + TAU * self.theta_dot,
            theta_dot: self.theta_dot + TAU * theta_acc,
            steps_elapsed: self.steps_elapsed + 1,
        };
        let fell = next_state.out_of_bounds();
        let capped = next_state.steps_elapsed >= MAX_STEPS;
        Ok(StepOutcome {
            next_state,
            reward: 1.0,
            done: fell || capped,
            truncated: capped && !fell,
        })
    }
}

/// Stateful wrapper used by the episode loop.
#[derive(Debug, Clone, Default)]
pub struct CartPole {
    state: CartPoleState,
    done: bool,
}

impl CartPole {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> &CartPoleState {
        &self.state
    }
}

impl Environment for CartPole {
    type State = CartPoleState;

    fn reset(&mut self, rng: &mut Rng) -> CartPoleState {
        self.state = CartPoleState::reset(rng);
        self.done = false;
        self.state
    }

    fn step(&mut self, action: Action) -> Result<Transition<CartPoleState>, EnvError> {
        if self.done {
            return Err(EnvError::SteppedTerminal);
        }
        let out = self.state.step(action)?;
        self.state = out.next_state;
        self.done = out.done;
        Ok(Transition {
            next: out.next_state,
            reward: out.reward,
            done: out.done,
            truncated: out.truncated,
        })
    }
}
