//! Deterministic corridor: positions `0..n`, reward 1 on reaching `n - 1`.
//!
//! Used as an analytic oracle for the learner: with discount γ the optimal
//! value of moving right from `s` is `γ^(n - 2 - s)`.

use super::{Action, EnvError, Environment, Transition};
use crate::rng::Rng;

pub const DEFAULT_STATES: usize = 5;
/// Episodes that never reach the goal are truncated here.
pub const DEFAULT_MAX_STEPS: u32 = 1000;

#[derive(Debug, Clone)]
pub struct Chain {
    n_states: usize,
    max_steps: u32,
    position: usize,
    steps: u32,
}

impl Chain {
    pub fn new(n_states: usize) -> Result<Self, EnvError> {
        Self::with_max_steps(n_states, DEFAULT_MAX_STEPS)
    }

    pub fn with_max_steps(n_states: usize, max_steps: u32) -> Result<Self, EnvError> {
        if n_states < 2 {
            return Err(EnvError::ChainTooShort(n_states));
        }
        Ok(Self {
            n_states,
            max_steps,
            position: 0,
            steps: 0,
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn goal(&self) -> usize {
        self.n_states - 1
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn reset_position(&mut self) -> usize {
        self.position = 0;
        self.steps = 0;
        0
    }

    /// Pure transition function: `(next, reward, reached_goal)`.
    pub fn transition(
        &self,
        position: usize,
        action: Action,
    ) -> Result<(usize, f64, bool), EnvError> {
        if position >= self.goal() {
            return Err(EnvError::SteppedTerminal);
        }
        let next = match action {
            Action::Right => position + 1,
            Action::Left => position.saturating_sub(1),
        };
        let at_goal = next == self.goal();
        Ok((next, if at_goal { 1.0 } else { 0.0 }, at_goal))
    }

    /// Optimal action values under discount `gamma`, one `[left, right]` row
    /// per position. The goal row is zero.
    pub fn optimal_q(&self, gamma: f64) -> Vec<[f64; 2]> {
        let goal = self.goal();
        // from a non-goal position the best plan is to keep walking right
        let best = |p: usize| gamma.powi((goal - 1 - p) as i32);
        (0..self.n_states)
            .map(|s| {
                if s == goal {
                    [0.0, 0.0]
                } else {
                    [gamma * best(s.saturating_sub(1)), best(s)]
                }
            })
            .collect()
    }
}

impl Environment for Chain {
    type State = usize;

    fn reset(&mut self, _rng: &mut Rng) -> usize {
        self.reset_position()
    }

    fn step(&mut self, action: Action) -> Result<Transition<usize>, EnvError> {
        if self.steps >= self.max_steps {
            return Err(EnvError::SteppedTerminal);
        }
        let (next, reward, at_goal) = self.transition(self.position, action)?;
        self.position = next;
        self.steps += 1;
        let capped = self.steps >= self.max_steps;
        Ok(Transition {
            next,
            reward,
            done: at_goal || capped,
            truncated: capped && !at_goal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reset_is_zero() {
        let mut c = Chain::new(5).unwrap();
        let mut rng = Rng::seed(0);
        assert_eq!(c.reset(&mut rng), 0);
        c.step(Action::Right).unwrap();
        assert_eq!(c.reset(&mut rng), 0);
    }

    #[test]
    fn two_states_goal_adjacent() {
        let c = Chain::new(2).unwrap();
        assert_eq!(c.transition(0, Action::Right).unwrap(), (1, 1.0, true));
    }

    #[test]
    fn step_into_goal() {
        let c = Chain::new(5).unwrap();
        assert_eq!(c.transition(3, Action::Right).unwrap(), (4, 1.0, true));
    }

    #[test]
    fn left_wall_clamps() {
        let c = Chain::new(5).unwrap();
        assert_eq!(c.transition(0, Action::Left).unwrap(), (0, 0.0, false));
    }

    #[test]
    fn goal_is_terminal() {
        let c = Chain::new(5).unwrap();
        assert_eq!(
            c.transition(4, Action::Left),
            Err(EnvError::SteppedTerminal)
        );
        assert!(Chain::new(1).is_err());
    }

    #[test]
    fn truncates_at_step_limit() {
        let mut c = Chain::with_max_steps(5, 3).unwrap();
        c.reset(&mut Rng::seed(0));
        assert!(!c.step(Action::Left).unwrap().done);
        assert!(!c.step(Action::Left).unwrap().done);
        let last = c.step(Action::Left).unwrap();
        assert!(last.done && last.truncated && !last.terminal());
        assert!(c.step(Action::Left).is_err());
    }

    /// Value iteration to a fixed point, independent of the closed form.
    fn value_iteration(chain: &Chain, gamma: f64) -> Vec<[f64; 2]> {
        let n = chain.n_states();
        let mut q = vec![[0.0f64; 2]; n];
        for _ in 0..10_000 {
            let mut next = q.clone();
            for (s, row) in next.iter_mut().enumerate().take(chain.goal()) {
                for a in Action::ALL {
                    let (s2, r, done) = chain.transition(s, a).unwrap();
                    let boot = if done { 0.0 } else { q[s2][0].max(q[s2][1]) };
                    row[a.index()] = r + gamma * boot;
                }
            }
            let delta = q
                .iter()
                .zip(&next)
                .flat_map(|(a, b)| [(a[0] - b[0]).abs(), (a[1] - b[1]).abs()])
                .fold(0.0, f64::max);
            q = next;
            if delta == 0.0 {
                break;
            }
        }
        q
    }

    #[test]
    fn value_iteration_matches_closed_form() {
        for n in [2, 3, 5, 8] {
            let chain = Chain::new(n).unwrap();
            let gamma = 0.9;
            let vi = value_iteration(&chain, gamma);
            let closed = chain.optimal_q(gamma);
            for s in 0..chain.goal() {
                let expected_right = gamma.powi((n - 2 - s) as i32);
                assert!((vi[s][1] - expected_right).abs() < 1e-10);
                assert!((vi[s][0] - closed[s][0]).abs() < 1e-10);
                assert!((closed[s][1] - expected_right).abs() < 1e-12);
            }
        }
        let q = value_iteration(&Chain::new(5).unwrap(), 0.9);
        assert!((q[0][1] - 0.729).abs() < 1e-10);
    }
}
