use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use super::raw::{EpisodeKey, EpisodeResult};
use crate::agents::{AgentConfig, BudgetMeter, Decision};
use crate::gamekit::{self, load_level, load_level_from_dir, GameId, GameState, Status};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one episode, shared by every agent. Distinct (game, level,
/// repetition) triples always get distinct seeds.
pub fn episode_seed(base: u64, game: GameId, level: usize, repetition: u32) -> u64 {
    let packed = ((game.index() as u64) << 48) | ((level as u64) << 32) | u64::from(repetition);
    splitmix64(base ^ splitmix64(packed))
}

/// Seed of the agent's own random stream within an episode.
pub fn agent_seed(episode_seed: u64) -> u64 {
    splitmix64(episode_seed ^ 0xA5A5_A5A5_A5A5_A5A5)
}

/// Everything needed to replay one episode.
#[derive(Debug, Clone)]
pub struct EpisodeSpec<'a> {
    pub agent_id: &'a str,
    pub agent: &'a AgentConfig,
    pub game: GameId,
    pub level: usize,
    pub repetition: u32,
    pub seed: u64,
    pub budget: u64,
    pub levels_dir: Option<&'a Path>,
}

/// Plays one episode with a fresh budget every frame.
pub fn run_episode(spec: &EpisodeSpec<'_>) -> EpisodeResult {
    run_episode_with(spec, &mut |_, _| {})
}

/// Like [`run_episode`], calling `observe` with each state and the decision
/// taken in it. A panicking agent or an illegal action ends the episode as a
/// loss with the error recorded.
pub fn run_episode_with(spec: &EpisodeSpec<'_>, observe: &mut dyn FnMut(&GameState, &Decision)) -> EpisodeResult {
    let key = EpisodeKey {
        agent: spec.agent_id.to_string(),
        game: spec.game,
        level: spec.level,
        repetition: spec.repetition,
    };
    let mut result =
        EpisodeResult { key, seed: spec.seed, win: false, score: 0.0, ticks: 0, fm_calls: 0, error: String::new() };
    let loaded = match spec.levels_dir {
        Some(dir) => load_level_from_dir(dir, spec.game, spec.level, spec.seed),
        None => load_level(spec.game, spec.level, spec.seed),
    };
    let mut state = match loaded {
        Ok(s) => s,
        Err(e) => {
            result.error = e.to_string();
            return result;
        }
    };
    let mut fm_calls = 0;
    let outcome = catch_unwind(AssertUnwindSafe(|| -> Result<(), String> {
        let mut agent = spec.agent.build(agent_seed(spec.seed));
        while !state.is_terminal() {
            let mut meter = BudgetMeter::new(spec.budget);
            let decision = agent.act(&state, &mut meter);
            fm_calls += meter.used();
            observe(&state, &decision);
            gamekit::advance(&mut state, decision.action).map_err(|e| e.to_string())?;
        }
        Ok(())
    }));
    let error = match outcome {
        Ok(Ok(())) => None,
        Ok(Err(e)) => Some(e),
        Err(panic) => Some(
            panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "agent panicked".into()),
        ),
    };
    if let Some(e) = error {
        log::error!("{} on {} level {} rep {}: {e}", spec.agent_id, spec.game, spec.level, spec.repetition);
        result.error = e;
        state.status = Status::Loss;
    }
    result.win = state.status == Status::Win;
    result.score = state.score;
    result.ticks = state.tick;
    result.fm_calls = fm_calls;
    result
}
