//! Experiment harness: expands a config into seeded episodes, runs them on a
//! worker pool, appends raw results and aggregates them into summary tables.

mod config;
mod episode;
mod experiment;
mod raw;
mod summary;

pub use config::{ablation_grid, preset, AblationGroup, AgentEntry, ExperimentConfig, OUT_DIR_ENV, PRESET_NAMES};
pub use episode::{agent_seed, episode_seed, run_episode, run_episode_with, EpisodeSpec};
pub use experiment::{run_experiment, ExperimentOutcome};
pub use raw::{read_raw, EpisodeKey, EpisodeResult, RawWriter};
pub use summary::{emit_csv, emit_markdown, parse_summary_csv, summarize, SummaryRow, ALL_EPISODES, ALL_GAMES};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Game(#[from] crate::gamekit::GameError),
}
