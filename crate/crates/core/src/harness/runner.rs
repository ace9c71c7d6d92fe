use rayon::prelude::*;

use super::config::{EnvironmentKind, ExperimentConfig};
use crate::agent::{Agent, IndexEncoder, StateEncoder};
use crate::env::{CartPole, Chain, Environment};
use crate::error::{Error, Result};
use crate::metrics::RunResult;
use crate::rng::Rng;

/// How many seeds may run at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Jobs(usize),
    /// One worker per available processor.
    Auto,
}

impl Parallelism {
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            None => Parallelism::Auto,
            Some(0 | 1) => Parallelism::Sequential,
            Some(n) => Parallelism::Jobs(n),
        }
    }
}

/// Runs every seed of `config`. Results come back in the config's seed order
/// whatever the parallelism.
pub fn run_experiment(
    config: &ExperimentConfig,
    parallelism: Parallelism,
) -> Result<Vec<RunResult>> {
    config.validate()?;
    let run = |&seed: &u64| {
        run_seed(config, seed).map_err(|e| Error::Run {
            seed,
            source: Box::new(e),
        })
    };
    match parallelism {
        Parallelism::Sequential => config.seeds.iter().map(run).collect(),
        Parallelism::Auto => config.seeds.par_iter().map(run).collect(),
        Parallelism::Jobs(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?
            .install(|| config.seeds.par_iter().map(run).collect()),
    }
}

/// One independent run: fresh generator, table and schedule. ε is read
/// before each episode and the schedule is advanced once after it.
pub fn run_seed(config: &ExperimentConfig, seed: u64) -> Result<RunResult> {
    let params = config.agent.params();
    match config.environment {
        EnvironmentKind::Cartpole => {
            let agent = Agent::new(config.agent.discretizer(), params);
            drive(config, seed, CartPole::new(), agent)
        }
        EnvironmentKind::Chain => {
            let env = Chain::new(config.chain_states)?;
            let agent = Agent::new(IndexEncoder(config.chain_states), params);
            drive(config, seed, env, agent)
        }
    }
}

fn drive<Env, E>(
    config: &ExperimentConfig,
    seed: u64,
    mut env: Env,
    mut agent: Agent<E>,
) -> Result<RunResult>
where
    Env: Environment,
    E: StateEncoder<Env::State>,
{
    let mut rng = Rng::seed(seed);
    let mut scheduler = config.scheduler.build()?;
    let mut records = Vec::with_capacity(config.episodes as usize);
    for episode in 1..=config.episodes {
        let record = agent.run_episode(&mut env, episode, scheduler.epsilon(), &mut rng)?;
        scheduler.update(record.total_reward);
        records.push(record);
    }
    Ok(RunResult::new(seed, records))
}
