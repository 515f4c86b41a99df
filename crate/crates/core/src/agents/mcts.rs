use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check, Agent, ConfigError, Decision, ForwardModel};
use crate::gamekit::{evaluate_state, GameState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MctsConfig {
    pub exploration: f64,
    /// Maximum depth of tree descent plus random playout.
    pub rollout_depth: usize,
}

impl Default for MctsConfig {
    fn default() -> Self {
        Self { exploration: std::f64::consts::SQRT_2, rollout_depth: 15 }
    }
}

impl MctsConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check(self.exploration >= 0.0, "exploration", "must be non-negative")?;
        check(self.rollout_depth >= 1, "rollout_depth", "must be at least 1")
    }
}

#[derive(Debug, Clone)]
struct Node {
    children: Vec<Option<usize>>,
    visits: u32,
    total: f64,
}

impl Node {
    fn new(actions: usize) -> Self {
        Self { children: vec![None; actions], visits: 0, total: 0.0 }
    }
}

/// UCB1 score of a child; unvisited children score `+inf`. Values are
/// normalized into `[0, 1]` with the value range seen so far.
pub(crate) fn uct_value(child_total: f64, child_visits: u32, parent_visits: u32, bounds: (f64, f64), c: f64) -> f64 {
    if child_visits == 0 {
        return f64::INFINITY;
    }
    let mean = child_total / f64::from(child_visits);
    let (lo, hi) = bounds;
    let exploit = if hi > lo { (mean - lo) / (hi - lo) } else { 0.5 };
    exploit + c * (f64::from(parent_visits.max(1)).ln() / f64::from(child_visits)).sqrt()
}

/// Open-loop UCT: the tree stores action sequences and every iteration
/// replays them from the real state.
#[derive(Debug)]
pub struct MctsAgent {
    config: MctsConfig,
    rng: ChaCha8Rng,
}

impl MctsAgent {
    pub fn new(config: MctsConfig, seed: u64) -> Self {
        Self { config, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn select_child(&mut self, tree: &[Node], node: usize, bounds: (f64, f64)) -> usize {
        let parent = &tree[node];
        let mut best = (f64::NEG_INFINITY, 0);
        for (a, child) in parent.children.iter().enumerate() {
            let child = child.map(|c| &tree[c]).expect("fully expanded");
            // A tiny random jitter breaks ties between equal scores.
            let v = uct_value(child.total, child.visits, parent.visits, bounds, self.config.exploration)
                + self.rng.random::<f64>() * 1e-9;
            if v > best.0 {
                best = (v, a);
            }
        }
        best.1
    }
}

impl Agent for MctsAgent {
    fn act(&mut self, state: &GameState, model: &mut dyn ForwardModel) -> Decision {
        let n = state.action_count();
        if n == 1 {
            return Decision::fixed(0);
        }
        let depth = self.config.rollout_depth as u64;
        if model.remaining() < depth {
            return Decision::random(state, &mut self.rng);
        }
        let mut tree = vec![Node::new(n)];
        let mut bounds = (f64::INFINITY, f64::NEG_INFINITY);
        let mut iterations = 0;
        while model.remaining() >= depth {
            let mut s = state.clone();
            let mut path = vec![0];
            let mut node = 0;
            let mut steps = 0;
            // Selection and expansion.
            while !s.is_terminal() && steps < self.config.rollout_depth {
                let unexpanded: Vec<usize> = (0..n).filter(|&a| tree[node].children[a].is_none()).collect();
                let (action, expanded) = if unexpanded.is_empty() {
                    (self.select_child(&tree, node, bounds), false)
                } else {
                    (unexpanded[self.rng.random_range(0..unexpanded.len())], true)
                };
                if model.advance(&mut s, action).is_err() {
                    break;
                }
                steps += 1;
                let child = match tree[node].children[action] {
                    Some(c) => c,
                    None => {
                        tree.push(Node::new(n));
                        let c = tree.len() - 1;
                        tree[node].children[action] = Some(c);
                        c
                    }
                };
                path.push(child);
                node = child;
                if expanded {
                    break;
                }
            }
            // Random playout.
            while !s.is_terminal() && steps < self.config.rollout_depth {
                if model.advance(&mut s, self.rng.random_range(0..n)).is_err() {
                    break;
                }
                steps += 1;
            }
            let value = evaluate_state(&s);
            bounds = (bounds.0.min(value), bounds.1.max(value));
            for &i in &path {
                tree[i].visits += 1;
                tree[i].total += value;
            }
            iterations += 1;
        }
        let root = &tree[0];
        let (action, value) = root
            .children
            .iter()
            .enumerate()
            .filter_map(|(a, c)| c.map(|c| (a, &tree[c])))
            .max_by(|(_, x), (_, y)| {
                x.visits
                    .cmp(&y.visits)
                    .then((x.total / f64::from(x.visits)).total_cmp(&(y.total / f64::from(y.visits))))
            })
            .map(|(a, c)| (a, c.total / f64::from(c.visits)))
            .expect("at least one iteration ran");
        Decision {
            action,
            iterations,
            best_value: Some(value),
            species: 0,
            random_fallback: false,
            reinitialized: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::agents::BudgetMeter;
    use crate::gamekit::{parse_level, GameId};

    #[test]
    fn unvisited_child_is_infinite() {
        assert_eq!(uct_value(0.0, 0, 10, (0.0, 1.0), 1.4), f64::INFINITY);
        let v = uct_value(3.0, 4, 16, (0.0, 1.0), std::f64::consts::SQRT_2);
        assert!((v - (0.75 + std::f64::consts::SQRT_2 * (16f64.ln() / 4.0).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn walks_toward_the_portal() {
        let s = Arc::new(parse_level(GameId::Corridor, "########\n#A....G#\n########\n").unwrap()).instantiate(0);
        let mut m = BudgetMeter::new(1000);
        let d = MctsAgent::new(MctsConfig::default(), 2).act(&s, &mut m);
        assert_eq!(d.action, 1);
        assert!(m.used() <= 1000);
    }
}
