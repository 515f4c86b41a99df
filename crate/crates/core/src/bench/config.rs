use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::agents::{AgentConfig, FitnessMode, MctsConfig, RewardMode, RheaConfig, RhneatConfig, DEFAULT_BUDGET};
use crate::gamekit::{GameId, LEVELS_PER_GAME};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RHNEAT_OUT";

/// One agent column of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEntry {
    /// Label used in result files.
    pub id: String,
    #[serde(flatten)]
    pub agent: AgentConfig,
}

/// Declarative experiment: every agent plays every (game, level, repetition).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub games: Vec<GameId>,
    pub levels: Vec<usize>,
    pub repetitions: u32,
    pub base_seed: u64,
    /// Forward-model calls per decision.
    pub budget: u64,
    /// Directory of `<game>/level<k>.txt` maps; built-in levels when absent.
    pub levels_dir: Option<PathBuf>,
    /// Output directory; the CLI flag and `RHNEAT_OUT` take precedence in that order.
    pub out_dir: Option<PathBuf>,
    pub agents: Vec<AgentEntry>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            games: GameId::suite().to_vec(),
            levels: (0..LEVELS_PER_GAME).collect(),
            repetitions: 20,
            base_seed: 0,
            budget: DEFAULT_BUDGET,
            levels_dir: None,
            out_dir: None,
            agents: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let cfg: Self = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let err = |m: String| Err(BenchError::Config(m));
        if self.repetitions == 0 {
            return err("repetitions must be at least 1".into());
        }
        if self.games.is_empty() || self.levels.is_empty() || self.agents.is_empty() {
            return err("games, levels and agents must be non-empty".into());
        }
        if let Some(&k) = self.levels.iter().find(|&&k| k >= LEVELS_PER_GAME) {
            return err(format!("level {k} out of range 0..{LEVELS_PER_GAME}"));
        }
        let mut ids = HashSet::new();
        for a in &self.agents {
            if a.id.is_empty() || a.id.contains([',', '"', '\n']) {
                return err(format!("agent id '{}' must be non-empty and free of commas and quotes", a.id));
            }
            if !ids.insert(&a.id) {
                return err(format!("duplicate agent id '{}'", a.id));
            }
            a.agent.validate().map_err(|e| BenchError::Config(format!("agent '{}': {e}", a.id)))?;
        }
        Ok(())
    }

    /// Number of episodes the config expands to.
    pub fn episode_count(&self) -> usize {
        self.agents.len() * self.games.len() * self.levels.len() * self.repetitions as usize
    }
}

/// Built-in agent names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 11] =
    ["baseline", "sp", "cp", "sp-cp", "acc", "accdisc", "avg", "lr", "rhea", "mcts", "random"];

/// The agent behind a built-in name: the four speciation/carrying
/// ablations, the reward and fitness variants of the full configuration,
/// and the baselines.
pub fn preset(name: &str) -> Option<AgentConfig> {
    let full = RhneatConfig::default();
    let rh = |c: RhneatConfig| Some(AgentConfig::Rhneat(c));
    match name {
        "baseline" => rh(RhneatConfig::baseline()),
        "sp" => rh(RhneatConfig { population_carrying: false, ..full }),
        "cp" => rh(RhneatConfig { speciation: false, ..full }),
        "sp-cp" => rh(full),
        "acc" => rh(RhneatConfig { reward: RewardMode::Acc, ..full }),
        "accdisc" => rh(RhneatConfig { reward: RewardMode::AccDisc, gamma: 0.9, ..full }),
        "avg" => rh(RhneatConfig { fitness: FitnessMode::Avg, ..full }),
        "lr" => rh(RhneatConfig { fitness: FitnessMode::Lr, alpha: 0.2, ..full }),
        "rhea" => Some(AgentConfig::Rhea(RheaConfig::default())),
        "mcts" => Some(AgentConfig::Mcts(MctsConfig::default())),
        "random" => Some(AgentConfig::Random),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AblationGroup {
    /// Speciation and population carrying switched on and off.
    Abl,
    /// Rollout reward variants.
    Reward,
    /// Fitness assignment variants.
    Fitness,
    /// Full rhNEAT against RHEA and MCTS.
    Baselines,
    /// Every agent above.
    All,
}

impl AblationGroup {
    pub fn name(self) -> &'static str {
        match self {
            AblationGroup::Abl => "abl",
            AblationGroup::Reward => "reward",
            AblationGroup::Fitness => "fitness",
            AblationGroup::Baselines => "baselines",
            AblationGroup::All => "all",
        }
    }

    pub fn agents(self) -> &'static [&'static str] {
        match self {
            AblationGroup::Abl => &["baseline", "sp", "cp", "sp-cp"],
            AblationGroup::Reward => &["sp-cp", "acc", "accdisc"],
            AblationGroup::Fitness => &["sp-cp", "avg", "lr"],
            AblationGroup::Baselines => &["sp-cp", "rhea", "mcts"],
            AblationGroup::All => &["baseline", "sp", "cp", "sp-cp", "acc", "accdisc", "avg", "lr", "rhea", "mcts"],
        }
    }
}

impl FromStr for AblationGroup {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            AblationGroup::Abl,
            AblationGroup::Reward,
            AblationGroup::Fitness,
            AblationGroup::Baselines,
            AblationGroup::All,
        ]
        .into_iter()
        .find(|g| g.name() == s)
        .ok_or_else(|| BenchError::Config(format!("unknown ablation group '{s}'")))
    }
}

/// The ablation protocol for `group` over the benchmark suite: five levels,
/// twenty repetitions each.
pub fn ablation_grid(group: AblationGroup) -> ExperimentConfig {
    let agents = group
        .agents()
        .iter()
        .map(|&id| AgentEntry { id: id.into(), agent: preset(id).expect("group agents are presets") })
        .collect();
    ExperimentConfig { name: format!("ablate-{}", group.name()), agents, ..ExperimentConfig::default() }
}
