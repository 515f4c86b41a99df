//! NEAT machinery: genomes with innovation-numbered connection genes, the
//! five structural and weight mutations, gene-aligned crossover, the
//! compatibility distance and threshold speciation.

mod crossover;
mod distance;
mod genome;
mod innovation;
mod mutation;
mod population;
mod species;

pub use crossover::crossover;
pub use distance::{align, compatibility_distance, GeneAlignment};
pub use genome::{ConnectionGene, Genome, Innovation, NodeGene, NodeId, NodeKind};
pub use innovation::InnovationRegistry;
pub use mutation::{
    mutate, mutate_add_link, mutate_add_node, mutate_toggle_link, mutate_weight_random, mutate_weight_shift,
    toggle_connection, MutationReport,
};
pub use population::{discard_count, GenerationReport, Population};
pub use species::{speciate, Species};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NeatError {
    #[error("genome needs at least one input and one output node (got {inputs} in, {outputs} out)")]
    InvalidShape { inputs: usize, outputs: usize },
    #[error("parents have different shapes ({0:?} vs {1:?})")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
    #[error("genome text line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("genome invariant violated: {0}")]
    Invariant(String),
}

/// Tunable NEAT parameters. Defaults are the published rhNEAT settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NeatParams {
    /// Excess gene coefficient.
    pub c1: f64,
    /// Disjoint gene coefficient.
    pub c2: f64,
    /// Mean weight difference coefficient.
    pub c3: f64,
    /// Speciation threshold.
    pub compatibility_threshold: f64,
    pub prob_add_link: f64,
    pub prob_add_node: f64,
    pub prob_weight_shift: f64,
    pub prob_weight_random: f64,
    pub prob_toggle_link: f64,
    /// Half-width of the additive weight shift.
    pub weight_shift_strength: f64,
    /// Half-width of freshly drawn weights.
    pub weight_random_strength: f64,
    pub population_size: usize,
    /// Fraction of each species discarded every generation.
    pub discard_rate: f64,
    /// Average matching weights instead of picking one parent's gene.
    pub blended_crossover: bool,
}

impl Default for NeatParams {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            compatibility_threshold: 4.0,
            prob_add_link: 0.5,
            prob_add_node: 0.3,
            prob_weight_shift: 0.5,
            prob_weight_random: 0.6,
            prob_toggle_link: 0.05,
            weight_shift_strength: 0.4,
            weight_random_strength: 1.0,
            population_size: 10,
            discard_rate: 0.2,
            blended_crossover: false,
        }
    }
}

impl NeatParams {
    pub fn validate(&self) -> Result<(), NeatError> {
        let probs = [
            ("prob_add_link", self.prob_add_link),
            ("prob_add_node", self.prob_add_node),
            ("prob_weight_shift", self.prob_weight_shift),
            ("prob_weight_random", self.prob_weight_random),
            ("prob_toggle_link", self.prob_toggle_link),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(name, format!("{p} is not a probability")));
            }
        }
        // Zero strengths are accepted as a degenerate range.
        for (name, w) in [
            ("weight_shift_strength", self.weight_shift_strength),
            ("weight_random_strength", self.weight_random_strength),
        ] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(invalid(name, format!("{w} must be finite and non-negative")));
            }
        }
        if !(self.discard_rate > 0.0 && self.discard_rate < 1.0) {
            return Err(invalid("discard_rate", format!("{} not in (0, 1)", self.discard_rate)));
        }
        if self.population_size < 2 {
            return Err(invalid("population_size", "must be at least 2".into()));
        }
        for (name, c) in [("c1", self.c1), ("c2", self.c2), ("c3", self.c3)] {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(invalid(name, format!("{c} must be finite and non-negative")));
            }
        }
        if self.compatibility_threshold.is_nan() || self.compatibility_threshold < 0.0 {
            return Err(invalid("compatibility_threshold", "must be non-negative".into()));
        }
        Ok(())
    }
}

fn invalid(name: &'static str, reason: String) -> NeatError {
    NeatError::InvalidParam { name, reason }
}
