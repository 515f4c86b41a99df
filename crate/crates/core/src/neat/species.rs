use rand::seq::IndexedRandom;
use rand::Rng;

use super::distance::compatibility_distance;
use super::genome::Genome;
use super::NeatParams;

/// A niche of similar genomes. `members` holds creation indices.
#[derive(Debug, Clone)]
pub struct Species {
    pub id: u32,
    pub representative: Genome,
    pub members: Vec<u64>,
}

/// Partitions `population` into species.
///
/// Each surviving species first re-draws its representative uniformly from
/// its previous members still present in `population` (keeping the old one
/// if none remain). Genomes then join the first species, in id order, whose
/// representative lies within the compatibility threshold; the rest found
/// new species. Species left without members are dropped.
pub fn speciate<R: Rng + ?Sized>(
    population: &[Genome],
    previous: &[Species],
    params: &NeatParams,
    next_species_id: &mut u32,
    rng: &mut R,
) -> Vec<Species> {
    let find = |idx: u64| population.iter().find(|g| g.creation_index == idx);
    let mut species: Vec<Species> = previous
        .iter()
        .map(|s| {
            let present: Vec<&Genome> = s.members.iter().filter_map(|&m| find(m)).collect();
            let representative = present.choose(rng).map_or_else(|| s.representative.clone(), |g| (*g).clone());
            Species { id: s.id, representative, members: Vec::new() }
        })
        .collect();
    species.sort_by_key(|s| s.id);

    for g in population {
        let home = species
            .iter_mut()
            .find(|s| compatibility_distance(&s.representative, g, params) <= params.compatibility_threshold);
        match home {
            Some(s) => s.members.push(g.creation_index),
            None => {
                species.push(Species {
                    id: *next_species_id,
                    representative: g.clone(),
                    members: vec![g.creation_index],
                });
                *next_species_id += 1;
            }
        }
    }
    species.retain(|s| !s.members.is_empty());
    species
}
