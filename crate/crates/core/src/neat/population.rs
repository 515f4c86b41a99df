use std::cmp::Ordering;

use rand::Rng;

use super::crossover::crossover;
use super::genome::Genome;
use super::innovation::InnovationRegistry;
use super::mutation::mutate;
use super::species::{speciate, Species};
use super::{NeatError, NeatParams};

/// Number of members discarded from a group of `size`: `ceil(rate * size)`,
/// always leaving at least one member.
pub fn discard_count(size: usize, rate: f64) -> usize {
    if size == 0 {
        return 0;
    }
    ((rate * size as f64).ceil() as usize).min(size - 1)
}

/// Outcome of one [`Population::evolve_generation`] call.
#[derive(Debug, Clone)]
pub struct GenerationReport {
    /// Highest-fitness genome of this generation's evaluation, captured
    /// before selection.
    pub best: Genome,
    pub species_count: usize,
    pub discarded: Vec<u64>,
    pub offspring: Vec<u64>,
}

/// A fixed-size population evolving under one innovation registry.
#[derive(Debug, Clone)]
pub struct Population {
    genomes: Vec<Genome>,
    species: Vec<Species>,
    registry: InnovationRegistry,
    next_creation: u64,
    next_species_id: u32,
    speciation: bool,
    generation: u64,
}

/// Fitness descending, then creation index ascending.
fn rank(a: &Genome, b: &Genome) -> Ordering {
    b.fitness.total_cmp(&a.fitness).then(a.creation_index.cmp(&b.creation_index))
}

impl Population {
    /// `size` empty-topology genomes with creation indices `0..size`.
    pub fn new(size: usize, input_count: usize, output_count: usize, speciation: bool) -> Result<Self, NeatError> {
        if size < 2 {
            return Err(NeatError::InvalidParam { name: "population_size", reason: "must be at least 2".into() });
        }
        let template = Genome::new(input_count, output_count)?;
        let genomes = (0..size as u64)
            .map(|i| {
                let mut g = template.clone();
                g.creation_index = i;
                g
            })
            .collect();
        Ok(Self {
            genomes,
            species: Vec::new(),
            registry: InnovationRegistry::new(input_count, output_count),
            next_creation: size as u64,
            next_species_id: 0,
            speciation,
            generation: 0,
        })
    }

    pub fn genomes(&self) -> &[Genome] {
        &self.genomes
    }

    pub fn genomes_mut(&mut self) -> &mut [Genome] {
        &mut self.genomes
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    /// Species count; without speciation the whole population is one implicit species.
    pub fn species_count(&self) -> usize {
        if self.speciation {
            self.species.len()
        } else {
            1
        }
    }

    pub fn registry(&self) -> &InnovationRegistry {
        &self.registry
    }

    pub fn speciation(&self) -> bool {
        self.speciation
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn input_count(&self) -> usize {
        self.genomes[0].input_count()
    }

    pub fn output_count(&self) -> usize {
        self.genomes[0].output_count()
    }

    /// Best genome by fitness among those evaluated at least once.
    pub fn best_evaluated(&self) -> Option<&Genome> {
        self.genomes.iter().filter(|g| g.evaluations > 0).min_by(|a, b| rank(a, b))
    }

    /// One generation: evaluate everyone, (re)speciate, truncate each group by
    /// the discard rate, drop groups reduced to a single member, and refill to
    /// the original size with mutated crossover offspring of same-group parents.
    pub fn evolve_generation<R, F>(&mut self, params: &NeatParams, rng: &mut R, mut evaluate: F) -> GenerationReport
    where
        R: Rng + ?Sized,
        F: FnMut(&mut Genome),
    {
        let size = self.genomes.len();
        for g in &mut self.genomes {
            evaluate(g);
        }
        let best = self.genomes.iter().min_by(|a, b| rank(a, b)).cloned().expect("non-empty population");

        let groups: Vec<Vec<u64>> = if self.speciation {
            self.species = speciate(&self.genomes, &self.species, params, &mut self.next_species_id, rng);
            self.species.iter().map(|s| s.members.clone()).collect()
        } else {
            vec![self.genomes.iter().map(|g| g.creation_index).collect()]
        };

        let mut by_index: std::collections::HashMap<u64, Genome> =
            std::mem::take(&mut self.genomes).into_iter().map(|g| (g.creation_index, g)).collect();

        // Truncation inside each group.
        let mut survivors: Vec<Vec<Genome>> = Vec::with_capacity(groups.len());
        let mut discarded = Vec::new();
        for members in &groups {
            let mut ranked: Vec<Genome> = members.iter().filter_map(|m| by_index.remove(m)).collect();
            ranked.sort_by(rank);
            let drop = discard_count(ranked.len(), params.discard_rate);
            for g in ranked.drain(ranked.len() - drop..) {
                discarded.push(g.creation_index);
            }
            survivors.push(ranked);
        }

        // Species down to their last member go extinct; if that would empty
        // the population, the group holding the best survivor is spared.
        let mut keep: Vec<bool> = survivors.iter().map(|s| !self.speciation || s.len() > 1).collect();
        if !keep.iter().any(|&k| k) {
            let champion = (0..survivors.len())
                .min_by(|&a, &b| rank(&survivors[a][0], &survivors[b][0]))
                .expect("at least one group");
            keep[champion] = true;
        }
        let mut slots = vec![0usize; survivors.len()];
        let mut orphaned = 0;
        for (gi, group) in survivors.iter().enumerate() {
            let lost = groups[gi].len() - group.len();
            if keep[gi] {
                slots[gi] += lost;
            } else {
                orphaned += groups[gi].len();
                discarded.extend(group.iter().map(|g| g.creation_index));
            }
        }
        let live: Vec<usize> = (0..survivors.len()).filter(|&gi| keep[gi]).collect();
        for _ in 0..orphaned {
            slots[live[rng.random_range(0..live.len())]] += 1;
        }

        let mut offspring = Vec::new();
        let mut next_genomes = Vec::with_capacity(size);
        let mut next_members: Vec<Vec<u64>> = Vec::with_capacity(survivors.len());
        for (gi, group) in survivors.iter().enumerate() {
            if !keep[gi] {
                next_members.push(Vec::new());
                continue;
            }
            let mut members: Vec<u64> = group.iter().map(|g| g.creation_index).collect();
            for _ in 0..slots[gi] {
                let mut child = self.breed(group, params, rng);
                child.creation_index = self.next_creation;
                self.next_creation += 1;
                members.push(child.creation_index);
                offspring.push(child.creation_index);
                next_genomes.push(child);
            }
            next_members.push(members);
        }
        let mut population: Vec<Genome> =
            survivors.into_iter().zip(&keep).filter(|(_, &k)| k).flat_map(|(g, _)| g).collect();
        population.extend(next_genomes);
        population.sort_by_key(|g| g.creation_index);
        debug_assert_eq!(population.len(), size);
        self.genomes = population;

        if self.speciation {
            let mut species = std::mem::take(&mut self.species);
            for (s, members) in species.iter_mut().zip(next_members) {
                s.members = members;
            }
            species.retain(|s| !s.members.is_empty());
            self.species = species;
        }
        self.generation += 1;

        GenerationReport { best, species_count: self.species_count(), discarded, offspring }
    }

    fn breed<R: Rng + ?Sized>(&mut self, parents: &[Genome], params: &NeatParams, rng: &mut R) -> Genome {
        let a = rng.random_range(0..parents.len());
        let b = if parents.len() > 1 {
            let k = rng.random_range(0..parents.len() - 1);
            if k >= a {
                k + 1
            } else {
                k
            }
        } else {
            a
        };
        let (p, q) = (&parents[a], &parents[b]);
        let (fitter, other) = if q.fitness > p.fitness { (q, p) } else { (p, q) };
        let mut child =
            crossover(fitter, other, params.blended_crossover, rng).expect("parents share one population shape");
        child.reset_stats();
        mutate(&mut child, &mut self.registry, params, rng);
        child
    }
}
