//! Independent oracles and fixtures shared by the integration tests and the
//! acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rhneat_core::agents::{ForwardModel, ModelError};
use rhneat_core::gamekit::{self, load_level, GameId, GameState};
use rhneat_core::neat::{
    mutate_add_link, mutate_add_node, mutate_toggle_link, mutate_weight_random, mutate_weight_shift, Genome,
    InnovationRegistry, NodeKind,
};

/// Grows a random genome through the public mutation operators, keeping at
/// most `max_nodes` nodes.
pub fn grow_genome<R: Rng>(
    reg: &mut InnovationRegistry,
    inputs: usize,
    outputs: usize,
    steps: usize,
    max_nodes: usize,
    rng: &mut R,
) -> Genome {
    let mut g = Genome::new(inputs, outputs).unwrap();
    for _ in 0..steps {
        match rng.random_range(0..10) {
            0..=3 => {
                mutate_add_link(&mut g, reg, 2.0, rng);
            }
            4..=5 if g.nodes().len() < max_nodes => {
                mutate_add_node(&mut g, reg, rng);
            }
            6 => {
                mutate_weight_shift(&mut g, 0.5, rng);
            }
            7 => {
                mutate_weight_random(&mut g, 2.0, rng);
            }
            8 => {
                mutate_toggle_link(&mut g, rng);
            }
            _ => {}
        }
    }
    g
}

/// Compatibility distance recomputed from scratch by classifying every
/// innovation of the union independently.
pub fn oracle_distance(a: &Genome, b: &Genome, c1: f64, c2: f64, c3: f64) -> f64 {
    let wa: BTreeMap<u64, f64> = a.connections().iter().map(|c| (c.innovation, c.weight)).collect();
    let wb: BTreeMap<u64, f64> = b.connections().iter().map(|c| (c.innovation, c.weight)).collect();
    let max_a = wa.keys().max().copied().unwrap_or(0);
    let max_b = wb.keys().max().copied().unwrap_or(0);
    let (mut excess, mut disjoint, mut matching, mut diff) = (0usize, 0usize, 0usize, 0.0f64);
    let mut all: Vec<u64> = wa.keys().chain(wb.keys()).copied().collect();
    all.sort_unstable();
    all.dedup();
    for i in all {
        match (wa.get(&i), wb.get(&i)) {
            (Some(x), Some(y)) => {
                matching += 1;
                diff += (x - y).abs();
            }
            (Some(_), None) => {
                if i > max_b {
                    excess += 1
                } else {
                    disjoint += 1
                }
            }
            (None, Some(_)) => {
                if i > max_a {
                    excess += 1
                } else {
                    disjoint += 1
                }
            }
            (None, None) => unreachable!(),
        }
    }
    let larger = wa.len().max(wb.len());
    let n = if larger < 20 { 1.0 } else { larger as f64 };
    let w = if matching == 0 { 0.0 } else { diff / matching as f64 };
    c1 * excess as f64 / n + c2 * disjoint as f64 / n + c3 * w
}

/// Naive recursive network evaluation straight from the genome.
pub fn naive_activate(g: &Genome, inputs: &[f64]) -> Vec<f64> {
    fn value(g: &Genome, id: u32, inputs: &[f64], memo: &mut HashMap<u32, f64>) -> f64 {
        if g.node_kind(id) == Some(NodeKind::Input) {
            return inputs[id as usize];
        }
        if let Some(&v) = memo.get(&id) {
            return v;
        }
        let mut sum = 0.0;
        for c in g.connections().iter().filter(|c| c.enabled && c.to == id) {
            sum += c.weight * value(g, c.from, inputs, memo);
        }
        let v = sum.tanh();
        memo.insert(id, v);
        v
    }
    let mut memo = HashMap::new();
    let base = g.input_count() as u32;
    (0..g.output_count() as u32).map(|o| value(g, base + o, inputs, &mut memo)).collect()
}

/// Forward model wrapper that counts calls and records the deepest lookahead
/// (ticks beyond the decision state) any advance reached.
pub struct CountingModel {
    pub limit: u64,
    pub calls: u64,
    pub refused: u64,
    pub root_tick: u32,
    pub max_depth: u32,
}

impl CountingModel {
    pub fn new(limit: u64, root: &GameState) -> Self {
        Self { limit, calls: 0, refused: 0, root_tick: root.tick, max_depth: 0 }
    }
}

impl ForwardModel for CountingModel {
    fn advance(&mut self, state: &mut GameState, action: usize) -> Result<(), ModelError> {
        if self.calls >= self.limit {
            self.refused += 1;
            return Err(ModelError::Exhausted);
        }
        self.calls += 1;
        gamekit::advance(state, action)?;
        self.max_depth = self.max_depth.max(state.tick - self.root_tick);
        Ok(())
    }

    fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.calls)
    }
}

/// Ongoing states reached by random play on `game`, `count` of them.
pub fn sample_states(game: GameId, count: usize, seed: u64) -> Vec<GameState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let level = rng.random_range(0..5);
        let mut s = load_level(game, level, rng.random()).unwrap();
        let steps = rng.random_range(0..60);
        for _ in 0..steps {
            if s.is_terminal() {
                break;
            }
            let a = rng.random_range(0..s.action_count());
            gamekit::advance(&mut s, a).unwrap();
        }
        if !s.is_terminal() {
            out.push(s);
        }
    }
    out
}
