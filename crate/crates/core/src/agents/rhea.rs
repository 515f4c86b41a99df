use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check, Agent, ConfigError, Decision, ForwardModel};
use crate::gamekit::{evaluate_state, GameState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RheaConfig {
    pub population_size: usize,
    pub individual_length: usize,
    pub tournament_size: usize,
    /// Per-gene mutation probability; `None` means `1 / individual_length`.
    pub mutation_rate: Option<f64>,
    pub elitism: usize,
}

impl Default for RheaConfig {
    fn default() -> Self {
        Self { population_size: 10, individual_length: 15, tournament_size: 2, mutation_rate: None, elitism: 1 }
    }
}

impl RheaConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check(self.population_size >= 2, "population_size", "must be at least 2")?;
        check(self.individual_length >= 1, "individual_length", "must be at least 1")?;
        check(self.tournament_size >= 1, "tournament_size", "must be at least 1")?;
        check(self.elitism < self.population_size, "elitism", "must be below population_size")?;
        check(self.mutation_rate.is_none_or(|p| (0.0..=1.0).contains(&p)), "mutation_rate", "must lie in [0, 1]")
    }
}

/// Rolling horizon evolution over fixed-length action sequences, restarted
/// every frame. Fitness is the value of the state a sequence reaches.
#[derive(Debug)]
pub struct RheaAgent {
    config: RheaConfig,
    rng: ChaCha8Rng,
}

#[derive(Debug, Clone)]
struct Individual {
    actions: Vec<usize>,
    fitness: f64,
}

impl RheaAgent {
    pub fn new(config: RheaConfig, seed: u64) -> Self {
        Self { config, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn evaluate(state: &GameState, actions: &[usize], model: &mut dyn ForwardModel) -> f64 {
        let mut s = state.clone();
        for &a in actions {
            if s.is_terminal() || model.advance(&mut s, a).is_err() {
                break;
            }
        }
        evaluate_state(&s)
    }

    fn tournament<'a>(&mut self, pop: &'a [Individual]) -> &'a Individual {
        let mut best = &pop[self.rng.random_range(0..pop.len())];
        for _ in 1..self.config.tournament_size {
            let c = &pop[self.rng.random_range(0..pop.len())];
            if c.fitness > best.fitness {
                best = c;
            }
        }
        best
    }
}

/// Highest fitness first; the sort is stable so earlier individuals win ties.
fn sort_by_fitness(pop: &mut [Individual]) {
    pop.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
}

impl Agent for RheaAgent {
    fn act(&mut self, state: &GameState, model: &mut dyn ForwardModel) -> Decision {
        let n = state.action_count();
        if n == 1 {
            return Decision::fixed(0);
        }
        let (p, l) = (self.config.population_size, self.config.individual_length);
        if model.remaining() < (p * l) as u64 {
            return Decision::random(state, &mut self.rng);
        }
        let mut pop: Vec<Individual> = (0..p)
            .map(|_| {
                let actions: Vec<usize> = (0..l).map(|_| self.rng.random_range(0..n)).collect();
                let fitness = Self::evaluate(state, &actions, model);
                Individual { actions, fitness }
            })
            .collect();
        sort_by_fitness(&mut pop);
        let rate = self.config.mutation_rate.unwrap_or(1.0 / l as f64);
        let offspring = p - self.config.elitism;
        let mut generations = 1;
        while model.remaining() >= (offspring * l) as u64 {
            let mut next: Vec<Individual> = pop[..self.config.elitism].to_vec();
            for _ in 0..offspring {
                let a = self.tournament(&pop).actions.clone();
                let b = self.tournament(&pop).actions.clone();
                let actions: Vec<usize> = a
                    .iter()
                    .zip(&b)
                    .map(|(&x, &y)| {
                        let gene = if self.rng.random_bool(0.5) { x } else { y };
                        if self.rng.random_bool(rate) {
                            self.rng.random_range(0..n)
                        } else {
                            gene
                        }
                    })
                    .collect();
                let fitness = Self::evaluate(state, &actions, model);
                next.push(Individual { actions, fitness });
            }
            sort_by_fitness(&mut next);
            pop = next;
            generations += 1;
        }
        let best = &pop[0];
        Decision {
            action: best.actions[0],
            iterations: generations,
            best_value: Some(best.fitness),
            species: 0,
            random_fallback: false,
            reinitialized: true,
        }
    }
}
