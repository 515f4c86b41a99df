use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::episode::{episode_seed, run_episode, EpisodeSpec};
use super::raw::{append_timings, read_raw, EpisodeKey, RawWriter};
use super::summary::{emit_csv, emit_markdown, summarize, SummaryRow};
use super::BenchError;

/// Files and aggregates produced by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub raw_path: PathBuf,
    pub summary: Vec<SummaryRow>,
    /// Episodes played in this call.
    pub executed: usize,
    /// Episodes skipped because the raw file already held them.
    pub skipped: usize,
}

/// Runs every episode of `cfg` not yet recorded in `out_dir/raw.csv` on `jobs`
/// worker threads, then writes `summary.csv` and `summary.md` computed from
/// the complete raw file. Wall-clock times go to `timings.csv`.
///
/// Episodes run in fixed-size batches, each appended in config order once
/// it completes, so the raw file does not depend on `jobs` or on where an
/// interrupted run stopped.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path, jobs: usize) -> Result<ExperimentOutcome, BenchError> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let raw_path = out_dir.join("raw.csv");
    let mut writer = RawWriter::open(&raw_path)?;

    let mut pending = Vec::new();
    let mut skipped = 0;
    for entry in &cfg.agents {
        for &game in &cfg.games {
            for &level in &cfg.levels {
                for repetition in 0..cfg.repetitions {
                    let key = EpisodeKey { agent: entry.id.clone(), game, level, repetition };
                    if writer.is_done(&key) {
                        skipped += 1;
                        continue;
                    }
                    pending.push(EpisodeSpec {
                        agent_id: &entry.id,
                        agent: &entry.agent,
                        game,
                        level,
                        repetition,
                        seed: episode_seed(cfg.base_seed, game, level, repetition),
                        budget: cfg.budget,
                        levels_dir: cfg.levels_dir.as_deref(),
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| BenchError::Config(format!("worker pool: {e}")))?;
    let timings_path = out_dir.join("timings.csv");
    let total = pending.len();
    for (b, batch) in pending.chunks(BATCH).enumerate() {
        let done: Vec<_> = pool.install(|| {
            batch
                .par_iter()
                .map(|spec| {
                    let start = Instant::now();
                    let r = run_episode(spec);
                    (r, start.elapsed().as_secs_f64() * 1e3)
                })
                .collect()
        });
        let (results, times): (Vec<_>, Vec<_>) = done.into_iter().unzip();
        writer.append(&results)?;
        let keyed: Vec<(EpisodeKey, f64)> = results.iter().map(|r| r.key.clone()).zip(times).collect();
        append_timings(&timings_path, &keyed)?;
        log::info!("{}: {}/{} episodes", cfg.name, (b * BATCH + batch.len()).min(total), total);
    }
    writer.flush()?;
    drop(writer);

    let all = read_raw(&raw_path)?;
    let summary = summarize(&all);
    std::fs::write(out_dir.join("summary.csv"), emit_csv(&summary)?)?;
    std::fs::write(out_dir.join("summary.md"), emit_markdown(&summary))?;
    Ok(ExperimentOutcome { raw_path, summary, executed: total, skipped })
}

const BATCH: usize = 32;
