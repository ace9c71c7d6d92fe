//! Plain CSV output. Floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::{aggregate_runs, EpisodeRecord, RunResult};

pub const AGGREGATE_FILE: &str = "aggregate.csv";

pub fn run_file_name(seed: u64) -> String {
    format!("run_seed{seed}.csv")
}

pub fn run_csv(run: &RunResult) -> String {
    let mut out = String::from("episode,reward,epsilon,steps\n");
    for r in &run.records {
        writeln!(
            out,
            "{},{:?},{:?},{}",
            r.episode, r.total_reward, r.epsilon, r.steps
        )
        .expect("write to String");
    }
    out
}

pub fn aggregate_csv(runs: &[RunResult]) -> Result<String> {
    let agg = aggregate_runs(runs)?;
    let mut out = String::from("episode,mean_reward,mean_rolling100,mean_epsilon\n");
    for i in 0..agg.len() {
        let rolling = agg.mean_rolling[i]
            .map(|v| format!("{v:?}"))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{:?},{},{:?}",
            i + 1,
            agg.mean_reward[i],
            rolling,
            agg.mean_epsilon[i]
        )
        .expect("write to String");
    }
    Ok(out)
}

/// Writes one `run_seed<N>.csv` per run plus `aggregate.csv` into `dir`,
/// creating it if needed. Returns the written paths.
pub fn emit_csv(runs: &[RunResult], dir: &Path) -> Result<Vec<PathBuf>> {
    if runs.is_empty() {
        return Err(Error::Empty("no runs to write"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(runs.len() + 1);
    for run in runs {
        let path = dir.join(run_file_name(run.seed));
        write(&path, &run_csv(run))?;
        written.push(path);
    }
    let path = dir.join(AGGREGATE_FILE);
    write(&path, &aggregate_csv(runs)?)?;
    written.push(path);
    Ok(written)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Reads back a per-run file written by [`emit_csv`].
pub fn read_run_csv(path: &Path) -> Result<RunResult> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let seed = path
        .file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| s.strip_prefix("run_seed"))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Config(format!("{}: not a run_seed<N>.csv file", path.display())))?;
    let malformed =
        |line: usize| Error::Config(format!("{}:{line}: malformed row", path.display()));
    let mut lines = text.lines();
    if lines.next() != Some("episode,reward,epsilon,steps") {
        return Err(malformed(1));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let [episode, reward, epsilon, steps] = fields[..] else {
            return Err(malformed(i + 2));
        };
        records.push(EpisodeRecord {
            episode: episode.parse().map_err(|_| malformed(i + 2))?,
            total_reward: reward.parse().map_err(|_| malformed(i + 2))?,
            epsilon: epsilon.parse().map_err(|_| malformed(i + 2))?,
            steps: steps.parse().map_err(|_| malformed(i + 2))?,
        });
    }
    Ok(RunResult::new(seed, records))
}
