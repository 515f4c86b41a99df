use serde::{Deserialize, Serialize};

use super::ForwardModel;
use crate::features::{extract_into, DistanceMetric, FeatureSchema};
use crate::gamekit::{evaluate_state, GameState};
use crate::phenotype::{select_action, Network};

/// How the states visited by a rollout combine into one reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardMode {
    /// Value of the final state.
    #[default]
    Last,
    /// Sum over visited states.
    Acc,
    /// Discounted sum over visited states.
    AccDisc,
}

/// How repeated rollout rewards of one individual combine into its fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessMode {
    /// Latest reward only.
    #[default]
    Direct,
    /// Mean of all rewards.
    Avg,
    /// Exponential moving average with rate alpha, starting from zero.
    Lr,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RolloutResult {
    /// State values after each step.
    pub evaluations: Vec<f64>,
    pub steps: usize,
    /// The rollout ended in a win or loss.
    pub terminal: bool,
    /// The rollout was cut short by the budget.
    pub truncated: bool,
}

/// Reusable buffers for allocation-free rollouts.
#[derive(Debug, Default)]
pub struct RolloutScratch {
    features: Vec<f64>,
    activations: Vec<f64>,
    outputs: Vec<f64>,
}

/// Plays `net` forward from `start` for up to `length` steps, stopping early
/// at a terminal state or when the model runs out of budget. Categories
/// that vanish mid-rollout read as absent instead of changing `schema`.
#[allow(clippy::too_many_arguments)]
pub fn rollout(
    net: &Network,
    start: &GameState,
    length: usize,
    schema: &FeatureSchema,
    metric: DistanceMetric,
    bias: bool,
    model: &mut dyn ForwardModel,
    scratch: &mut RolloutScratch,
) -> RolloutResult {
    let mut state = start.clone();
    let mut result = RolloutResult { evaluations: Vec::with_capacity(length), ..Default::default() };
    scratch.outputs.resize(net.output_count(), 0.0);
    while result.steps < length && !state.is_terminal() {
        if model.remaining() == 0 {
            result.truncated = true;
            break;
        }
        extract_into(&state, schema, metric, &mut scratch.features);
        if bias {
            scratch.features.push(1.0);
        }
        let action = match net.activate_into(&scratch.features, &mut scratch.activations, &mut scratch.outputs) {
            Ok(()) => select_action(&scratch.outputs).unwrap_or(0),
            Err(e) => {
                log::error!("rollout activation failed: {e}");
                break;
            }
        };
        if model.advance(&mut state, action).is_err() {
            result.truncated = true;
            break;
        }
        result.steps += 1;
        result.evaluations.push(evaluate_state(&state));
    }
    result.terminal = state.is_terminal();
    result
}

/// Combines rollout evaluations; an empty rollout is worth 0.
pub fn reward(evaluations: &[f64], mode: RewardMode, gamma: f64) -> f64 {
    match mode {
        RewardMode::Last => evaluations.last().copied().unwrap_or(0.0),
        RewardMode::Acc => evaluations.iter().sum(),
        RewardMode::AccDisc => {
            let mut discount = 1.0;
            let mut total = 0.0;
            for &h in evaluations {
                total += discount * h;
                discount *= gamma;
            }
            total
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IndividualStats {
    pub fitness: f64,
    pub evaluations: u32,
}

/// Folds reward `f` into `stats`.
pub fn assign_fitness(stats: IndividualStats, f: f64, mode: FitnessMode, alpha: f64) -> IndividualStats {
    let n = stats.evaluations + 1;
    let fitness = match mode {
        FitnessMode::Direct => f,
        FitnessMode::Avg if stats.evaluations == 0 => f,
        FitnessMode::Avg => stats.fitness + (f - stats.fitness) / f64::from(n),
        FitnessMode::Lr => stats.fitness + alpha * (f - stats.fitness),
    };
    IndividualStats { fitness, evaluations: n }
}
