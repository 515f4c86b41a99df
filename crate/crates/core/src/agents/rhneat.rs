use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rollout::{assign_fitness, reward, rollout, FitnessMode, IndividualStats, RewardMode, RolloutScratch};
use super::{check, Agent, ConfigError, Decision, ForwardModel};
use crate::features::{extract, schema_of, DistanceMetric, FeatureSchema};
use crate::gamekit::GameState;
use crate::neat::{Genome, NeatParams, Population};
use crate::phenotype::{select_action, Activation, Network};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RhneatConfig {
    pub neat: NeatParams,
    pub rollout_length: usize,
    pub speciation: bool,
    /// Keep the evolved population between frames.
    pub population_carrying: bool,
    pub reward: RewardMode,
    pub gamma: f64,
    pub fitness: FitnessMode,
    pub alpha: f64,
    pub activation: Activation,
    pub distance_metric: DistanceMetric,
    /// Append a constant 1.0 input.
    pub bias: bool,
}

impl Default for RhneatConfig {
    fn default() -> Self {
        Self {
            neat: NeatParams::default(),
            rollout_length: 15,
            speciation: true,
            population_carrying: true,
            reward: RewardMode::Last,
            gamma: 0.9,
            fitness: FitnessMode::Direct,
            alpha: 0.2,
            activation: Activation::Tanh,
            distance_metric: DistanceMetric::Euclidean,
            bias: false,
        }
    }
}

impl RhneatConfig {
    /// The ablation baseline: no speciation, no population carrying.
    pub fn baseline() -> Self {
        Self { speciation: false, population_carrying: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.neat.validate().map_err(|e| ConfigError::Invalid { name: "neat", reason: e.to_string() })?;
        check(self.rollout_length >= 1, "rollout_length", "must be at least 1")?;
        check(self.gamma > 0.0 && self.gamma <= 1.0, "gamma", "must lie in (0, 1]")?;
        check(self.alpha > 0.0 && self.alpha <= 1.0, "alpha", "must lie in (0, 1]")
    }
}

/// Rolling horizon NEAT. Every frame evolves network genomes whose rollouts
/// are scored through the forward model, then runs the best network on the
/// current state.
#[derive(Debug)]
pub struct RhneatAgent {
    config: RhneatConfig,
    rng: ChaCha8Rng,
    population: Option<Population>,
    schema: Option<FeatureSchema>,
    scratch: RolloutScratch,
}

impl RhneatAgent {
    pub fn new(config: RhneatConfig, seed: u64) -> Self {
        Self {
            config,
            rng: ChaCha8Rng::seed_from_u64(seed),
            population: None,
            schema: None,
            scratch: RolloutScratch::default(),
        }
    }

    pub fn config(&self) -> &RhneatConfig {
        &self.config
    }

    /// The population carried into the next frame, if any.
    pub fn population(&self) -> Option<&Population> {
        self.population.as_ref()
    }

    fn decide(&self, genome: &Genome, state: &GameState, schema: &FeatureSchema) -> Option<usize> {
        let net = Network::build_with(genome, self.config.activation).ok()?;
        let mut inputs = extract(state, schema, self.config.distance_metric).ok()?;
        if self.config.bias {
            inputs.push(1.0);
        }
        select_action(&net.activate(&inputs).ok()?).ok()
    }
}

impl Agent for RhneatAgent {
    fn act(&mut self, state: &GameState, model: &mut dyn ForwardModel) -> Decision {
        let actions = state.action_count();
        if actions == 1 {
            return Decision::fixed(0);
        }
        let schema = schema_of(state);
        let cfg = &self.config;
        let reinitialized = !cfg.population_carrying || self.population.is_none() || self.schema != Some(schema);
        if reinitialized {
            let inputs = schema.input_count() + usize::from(cfg.bias);
            match Population::new(cfg.neat.population_size, inputs, actions, cfg.speciation) {
                Ok(p) => self.population = Some(p),
                Err(e) => {
                    log::error!("cannot create population: {e}");
                    return Decision::random(state, &mut self.rng);
                }
            }
            self.schema = Some(schema);
        }

        let per_generation = (cfg.neat.population_size * cfg.rollout_length) as u64;
        let population = self.population.as_mut().expect("population initialized above");
        let mut best: Option<Genome> = None;
        let mut generations = 0;
        let mut species = population.species_count();
        while model.remaining() >= per_generation {
            let scratch = &mut self.scratch;
            let report = population.evolve_generation(&cfg.neat, &mut self.rng, |g| {
                let Ok(net) = Network::build_with(g, cfg.activation) else {
                    log::error!("genome {} failed to compile", g.creation_index);
                    return;
                };
                let r =
                    rollout(&net, state, cfg.rollout_length, &schema, cfg.distance_metric, cfg.bias, model, scratch);
                let f = reward(&r.evaluations, cfg.reward, cfg.gamma);
                let stats = IndividualStats { fitness: g.fitness, evaluations: g.evaluations };
                let next = assign_fitness(stats, f, cfg.fitness, cfg.alpha);
                g.fitness = next.fitness;
                g.evaluations = next.evaluations;
            });
            generations += 1;
            species = report.species_count;
            best = Some(report.best);
        }
        let best = best.or_else(|| population.best_evaluated().cloned());

        let decision = match best.as_ref().and_then(|g| self.decide(g, state, &schema).map(|a| (a, g.fitness))) {
            Some((action, fitness)) => Decision {
                action,
                iterations: generations,
                best_value: Some(fitness),
                species,
                random_fallback: false,
                reinitialized,
            },
            None => {
                log::warn!("rhneat: no evaluated genome at tick {}, acting randomly", state.tick);
                Decision { reinitialized, ..Decision::random(state, &mut self.rng) }
            }
        };
        log::debug!(
            "rhneat tick={} action={} generations={} best={:?} species={} reinit={}",
            state.tick,
            decision.action,
            decision.iterations,
            decision.best_value,
            decision.species,
            decision.reinitialized
        );
        decision
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::BudgetMeter;
    use crate::gamekit::{load_level, GameId};

    #[test]
    fn six_generations_per_decision() {
        let s = load_level(GameId::Survive, 0, 0).unwrap();
        let mut agent = RhneatAgent::new(RhneatConfig::default(), 1);
        let mut m = BudgetMeter::new(1000);
        let d = agent.act(&s, &mut m);
        assert_eq!(d.iterations, 6);
        assert_eq!(m.used(), 900);
        assert!(d.reinitialized);
        assert_eq!(agent.population().unwrap().generation(), 6);
    }

    #[test]
    fn carrying_continues_the_population() {
        let s = load_level(GameId::Survive, 0, 0).unwrap();
        let mut agent = RhneatAgent::new(RhneatConfig::default(), 1);
        agent.act(&s, &mut BudgetMeter::new(1000));
        let carried: Vec<String> = agent.population().unwrap().genomes().iter().map(|g| g.to_text()).collect();
        let d = agent.act(&s, &mut BudgetMeter::new(0));
        assert!(!d.reinitialized);
        let now: Vec<String> = agent.population().unwrap().genomes().iter().map(|g| g.to_text()).collect();
        assert_eq!(carried, now);
        let d = agent.act(&s, &mut BudgetMeter::new(1000));
        assert!(!d.reinitialized);
        assert_eq!(agent.population().unwrap().generation(), 12);
    }

    #[test]
    fn no_carrying_restarts_creation_indices() {
        let s = load_level(GameId::Survive, 0, 0).unwrap();
        let mut agent = RhneatAgent::new(RhneatConfig::baseline(), 1);
        for _ in 0..2 {
            let d = agent.act(&s, &mut BudgetMeter::new(300));
            assert!(d.reinitialized);
            assert_eq!(d.species, 1);
            let max = agent.population().unwrap().genomes().iter().map(|g| g.creation_index).max().unwrap();
            assert!(max < 10 + 2 * 2);
        }
    }

    #[test]
    fn zero_budget_acts_randomly() {
        let s = load_level(GameId::Collect, 0, 0).unwrap();
        let d = RhneatAgent::new(RhneatConfig::default(), 3).act(&s, &mut BudgetMeter::new(0));
        assert!(d.random_fallback);
        assert!(d.action < 4);
    }

    #[test]
    fn decisions_are_deterministic() {
        let s = load_level(GameId::Trap, 1, 5).unwrap();
        let run = || RhneatAgent::new(RhneatConfig::default(), 9).act(&s, &mut BudgetMeter::new(1000));
        assert_eq!(run(), run());
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(RhneatConfig { gamma: 0.0, ..Default::default() }.validate().is_err());
        assert!(RhneatConfig { alpha: 1.5, ..Default::default() }.validate().is_err());
        assert!(RhneatConfig { rollout_length: 0, ..Default::default() }.validate().is_err());
        assert!(RhneatConfig::default().validate().is_ok());
    }
}
