//! Budget-metered decision makers: rhNEAT with its ablation switches, RHEA,
//! MCTS and a random baseline.

mod mcts;
mod rhea;
mod rhneat;
mod rollout;

pub use mcts::{MctsAgent, MctsConfig};
pub use rhea::{RheaAgent, RheaConfig};
pub use rhneat::{RhneatAgent, RhneatConfig};
pub use rollout::{
    assign_fitness, reward, rollout, FitnessMode, IndividualStats, RewardMode, RolloutResult, RolloutScratch,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamekit::{self, GameError, GameState};

/// Forward-model calls allowed per decision.
pub const DEFAULT_BUDGET: u64 = 1000;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("forward model budget exhausted")]
    Exhausted,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Access to the simulator during a decision. Every successful `advance`
/// costs one call.
pub trait ForwardModel {
    /// Advances `state` by one tick. Fails without touching `state` once the
    /// budget is spent.
    fn advance(&mut self, state: &mut GameState, action: usize) -> Result<(), ModelError>;

    /// Calls still available.
    fn remaining(&self) -> u64;
}

/// Per-decision call counter that refuses to overdraw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetMeter {
    limit: u64,
    used: u64,
}

impl BudgetMeter {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

impl ForwardModel for BudgetMeter {
    fn advance(&mut self, state: &mut GameState, action: usize) -> Result<(), ModelError> {
        if self.used >= self.limit {
            return Err(ModelError::Exhausted);
        }
        gamekit::advance(state, action)?;
        self.used += 1;
        Ok(())
    }

    fn remaining(&self) -> u64 {
        self.limit - self.used
    }
}

/// An agent's choice plus what it cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub action: usize,
    /// Evolution generations or search iterations completed.
    pub iterations: u32,
    /// Best fitness or root value found, when any search ran.
    pub best_value: Option<f64>,
    pub species: usize,
    /// The action was drawn at random because no search could run.
    pub random_fallback: bool,
    /// rhNEAT started from a fresh population this frame.
    pub reinitialized: bool,
}

impl Decision {
    pub(crate) fn fixed(action: usize) -> Self {
        Self { action, iterations: 0, best_value: None, species: 0, random_fallback: false, reinitialized: false }
    }

    pub(crate) fn random<R: Rng + ?Sized>(state: &GameState, rng: &mut R) -> Self {
        let mut d = Self::fixed(rng.random_range(0..state.action_count()));
        d.random_fallback = true;
        d
    }
}

pub trait Agent: Send {
    /// Picks an action for `state` (which must be ongoing), planning only
    /// through `model`.
    fn act(&mut self, state: &GameState, model: &mut dyn ForwardModel) -> Decision;
}

/// Uniformly random actions, never touching the model.
#[derive(Debug, Clone)]
pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Agent for RandomAgent {
    fn act(&mut self, state: &GameState, _model: &mut dyn ForwardModel) -> Decision {
        let mut d = Decision::random(state, &mut self.rng);
        d.random_fallback = false;
        d
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid agent setting {name}: {reason}")]
    Invalid { name: &'static str, reason: String },
}

/// Any agent with its settings; the `kind` key selects the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AgentConfig {
    Rhneat(RhneatConfig),
    Rhea(RheaConfig),
    Mcts(MctsConfig),
    Random,
}

impl AgentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            AgentConfig::Rhneat(c) => c.validate(),
            AgentConfig::Rhea(c) => c.validate(),
            AgentConfig::Mcts(c) => c.validate(),
            AgentConfig::Random => Ok(()),
        }
    }

    /// A fresh agent for one episode, its random stream seeded by `seed`.
    pub fn build(&self, seed: u64) -> Box<dyn Agent> {
        match self {
            AgentConfig::Rhneat(c) => Box::new(RhneatAgent::new(c.clone(), seed)),
            AgentConfig::Rhea(c) => Box::new(RheaAgent::new(c.clone(), seed)),
            AgentConfig::Mcts(c) => Box::new(MctsAgent::new(c.clone(), seed)),
            AgentConfig::Random => Box::new(RandomAgent::new(seed)),
        }
    }
}

pub(crate) fn check(ok: bool, name: &'static str, reason: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Invalid { name, reason: reason.into() })
    }
}
