//! Randomized invariants for schedules, physics, learner and metrics.

use proptest::prelude::*;

use rbed::agent::{AgentParams, QTable};
use rbed::env::cartpole::MAX_STEPS;
use rbed::env::{Action, CartPoleState, Chain};
use rbed::metrics::{aggregate_runs, rolling_mean, solved_at, EpisodeRecord, RunResult};
use rbed::rng::Rng;
use rbed::sched::{ExpState, RbedState, Scheduler};

fn records(rewards: &[f64]) -> Vec<EpisodeRecord> {
    rewards
        .iter()
        .enumerate()
        .map(|(i, &r)| EpisodeRecord {
            episode: i as u32 + 1,
            total_reward: r,
            epsilon: 0.0,
            steps: r as u32,
        })
        .collect()
}

/// Exhaustive scan over every window, written without rolling sums.
fn brute_force_solved(rewards: &[f64], threshold: f64, window: usize) -> Option<u32> {
    (window..=rewards.len())
        .find(|&end| {
            let sum: f64 = rewards[end - window..end].iter().sum();
            sum / window as f64 >= threshold
        })
        .map(|end| end as u32)
}

fn rbed_strategy() -> impl Strategy<Value = RbedState> {
    (
        1.0f64..400.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
        0.5f64..5.0,
        -10.0f64..50.0,
    )
        .prop_map(|(target, a, b, inc, thr)| {
            let (start, min) = if a >= b { (a, b) } else { (b, a) };
            RbedState::new(target, start, min, inc, thr).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rbed_monotone_and_bounded(state in rbed_strategy(), rewards in prop::collection::vec(-10.0f64..250.0, 0..400)) {
        let mut s = state.clone();
        let mut last_eps = s.epsilon();
        let mut last_thr = s.reward_threshold();
        for r in rewards {
            s.update(r);
            prop_assert!(s.epsilon() <= last_eps);
            prop_assert!(s.epsilon() >= s.epsilon_min());
            prop_assert!(s.epsilon() <= state.epsilon());
            prop_assert!(!s.epsilon().is_nan());
            prop_assert!(s.reward_threshold() >= last_thr);
            prop_assert_eq!(s.change(), state.change());
            last_eps = s.epsilon();
            last_thr = s.reward_threshold();
        }
    }

    #[test]
    fn rbed_ignores_rewards_below_threshold(state in rbed_strategy(), gaps in prop::collection::vec(1e-9f64..100.0, 0..200)) {
        let mut s = state.clone();
        for g in gaps {
            s.update(s.reward_threshold() - g);
        }
        prop_assert_eq!(s, state);
    }

    #[test]
    fn rbed_depends_only_on_crossing_count(
        state in rbed_strategy(),
        pattern_a in prop::collection::vec(any::<bool>(), 0..300),
        pattern_b in prop::collection::vec(any::<bool>(), 0..300),
    ) {
        // Replay each pattern: true = meet the threshold, false = miss it.
        let replay = |pattern: &[bool]| {
            let mut s = state.clone();
            for &hit in pattern {
                let thr = s.reward_threshold();
                s.update(if hit { thr + 3.0 } else { thr - 1.0 });
            }
            s
        };
        let a = replay(&pattern_a);
        let b = replay(&pattern_b);
        let hits_a = pattern_a.iter().filter(|&&h| h).count();
        let hits_b = pattern_b.iter().filter(|&&h| h).count();
        if hits_a == hits_b {
            prop_assert_eq!(a.epsilon(), b.epsilon());
            prop_assert_eq!(a.reward_threshold(), b.reward_threshold());
        }
        let k = hits_a as f64;
        let expected = (state.epsilon() - k * state.change()).max(state.epsilon_min());
        prop_assert!((a.epsilon() - expected).abs() <= 1e-9);
        prop_assert!((a.reward_threshold() - (state.reward_threshold() + k * state.reward_increment())).abs() <= 1e-9);
    }

    #[test]
    fn exponential_matches_closed_form(start in 0.01f64..=1.0, rate in 0.5f64..0.9999, n in 0usize..2000) {
        let mut s = ExpState::new(start, rate, 0.0).unwrap();
        for _ in 0..n {
            s.update();
        }
        let expected = start * rate.powi(n as i32);
        if expected > 1e-250 {
            prop_assert!(((s.epsilon() - expected) / expected).abs() < 1e-9);
        }
    }

    #[test]
    fn every_schedule_is_nonincreasing(kind in 0u8..3, rewards in prop::collection::vec(0.0f64..200.0, 1..300)) {
        let mut s = match kind {
            0 => Scheduler::Rbed(RbedState::cartpole_v0()),
            1 => Scheduler::Exponential(ExpState::new(1.0, 0.995, 0.01).unwrap()),
            _ => Scheduler::constant(0.3).unwrap(),
        };
        let mut last = s.epsilon();
        for r in rewards {
            s.update(r);
            prop_assert!(s.epsilon() <= last && (0.0..=1.0).contains(&s.epsilon()));
            last = s.epsilon();
        }
    }

    #[test]
    fn rng_streams_are_seed_determined(seed in any::<u64>()) {
        let mut a = Rng::seed(seed);
        let mut b = Rng::seed(seed);
        for _ in 0..64 {
            prop_assert_eq!(a.next_u64(), b.next_u64());
            let v = a.next_f64();
            prop_assert_eq!(v, b.next_f64());
            prop_assert!((0.0..1.0).contains(&v));
        }
    }

    #[test]
    fn solved_at_matches_brute_force(rewards in prop::collection::vec(prop_oneof![0u32..=200, 190u32..=200], 0..400), window in 1usize..120) {
        let rewards: Vec<f64> = rewards.into_iter().map(f64::from).collect();
        prop_assert_eq!(solved_at(&records(&rewards), 195.0, window), brute_force_solved(&rewards, 195.0, window));
    }

    #[test]
    fn rolling_mean_matches_window_sums(series in prop::collection::vec(-1e3f64..1e3, 0..500), window in 1usize..60) {
        let out = rolling_mean(&series, window).unwrap();
        prop_assert_eq!(out.len(), series.len().saturating_sub(window - 1));
        for (i, m) in out.iter().enumerate() {
            let direct: f64 = series[i..i + window].iter().sum::<f64>() / window as f64;
            prop_assert!((m - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn aggregate_is_order_invariant(
        runs in prop::collection::vec(prop::collection::vec(0.0f64..200.0, 120), 1..6),
        rotate in 0usize..6,
    ) {
        let results: Vec<RunResult> = runs
            .iter()
            .enumerate()
            .map(|(i, r)| RunResult::new(i as u64, records(r)))
            .collect();
        let mut shuffled = results.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rotate % len);
        shuffled.reverse();
        prop_assert_eq!(aggregate_runs(&results).unwrap(), aggregate_runs(&shuffled).unwrap());
    }

    #[test]
    fn q_values_stay_bounded(seed in any::<u64>(), alpha in 0.01f64..=1.0, gamma in 0.5f64..0.99) {
        let mut rng = Rng::seed(seed);
        let params = AgentParams { alpha, gamma };
        let bound = 1.0 / (1.0 - gamma);
        let mut q = QTable::new(8);
        for _ in 0..2000 {
            let s = rng.next_int_below(8).unwrap() as usize;
            let s2 = rng.next_int_below(8).unwrap() as usize;
            let a = if rng.next_f64() < 0.5 { Action::Left } else { Action::Right };
            let r = rng.next_f64();
            let terminal = rng.next_f64() < 0.1;
            q.update(s, a, r, s2, terminal, &params);
        }
        for v in q.values() {
            prop_assert!((0.0..=bound).contains(&v));
        }
    }
}

#[test]
fn rolling_mean_matches_prefix_sums_on_long_series() {
    let mut rng = Rng::seed(12);
    let series: Vec<f64> = (0..100_000)
        .map(|_| (rng.next_int_below(200).unwrap() + 1) as f64)
        .collect();
    let mut prefix = vec![0.0];
    for v in &series {
        prefix.push(prefix.last().unwrap() + v);
    }
    for window in [1, 7, 100, 4096] {
        let out = rolling_mean(&series, window).unwrap();
        for (j, m) in out.iter().enumerate() {
            let i = j + window;
            let expected = (prefix[i] - prefix[i - window]) / window as f64;
            assert!((m - expected).abs() <= 1e-12, "window {window} at {i}");
        }
    }
}

#[test]
fn cartpole_mirror_symmetry_is_exact() {
    let mut rng = Rng::seed(2718);
    for _ in 0..10_000 {
        let s = CartPoleState {
            x: rng.uniform(-2.4, 2.4),
            x_dot: rng.uniform(-3.0, 3.0),
            theta: rng.uniform(-0.2, 0.2),
            theta_dot: rng.uniform(-3.0, 3.0),
            steps_elapsed: rng.next_int_below(MAX_STEPS as u64).unwrap() as u32,
        };
        let a = if rng.next_f64() < 0.5 {
            Action::Left
        } else {
            Action::Right
        };
        let direct = s.step(a).unwrap();
        let mirrored = s.mirrored().step(a.mirrored()).unwrap();
        assert_eq!(direct.next_state.mirrored(), mirrored.next_state);
        assert_eq!(direct.done, mirrored.done);
    }
}

#[test]
fn upright_rest_is_a_fixed_point() {
    let mut s = CartPoleState::default();
    while !s.is_terminal() {
        s = s.step_with_force(0.0).unwrap().next_state;
        assert_eq!((s.x, s.x_dot, s.theta, s.theta_dot), (0.0, 0.0, 0.0, 0.0));
    }
}

#[test]
fn episode_reward_equals_step_count() {
    let mut rng = Rng::seed(5);
    for _ in 0..500 {
        let mut s = CartPoleState::reset(&mut rng);
        let mut reward = 0.0;
        loop {
            let a = if rng.next_f64() < 0.5 {
                Action::Left
            } else {
                Action::Right
            };
            let out = s.step(a).unwrap();
            reward += out.reward;
            s = out.next_state;
            if out.done {
                break;
            }
        }
        assert_eq!(reward, s.steps_elapsed as f64);
        assert!(reward <= 200.0);
    }
}

#[test]
fn chain_q_learning_with_exploration_converges() {
    let mut chain = Chain::new(5).unwrap();
    let mut agent = rbed::agent::Agent::new(
        rbed::agent::IndexEncoder(5),
        AgentParams {
            alpha: 0.1,
            gamma: 0.9,
        },
    );
    let mut rng = Rng::seed(31);
    let mut steps = 0;
    let mut episode = 0;
    while steps < 100_000 {
        episode += 1;
        steps += agent
            .run_episode(&mut chain, episode, 0.5, &mut rng)
            .unwrap()
            .steps;
    }
    let optimum = chain.optimal_q(0.9);
    for (s, row) in optimum.iter().enumerate().take(4) {
        for a in Action::ALL {
            assert!((agent.q.get(s, a) - row[a.index()]).abs() < 1e-3);
        }
    }
}
