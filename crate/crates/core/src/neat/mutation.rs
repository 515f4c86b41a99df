use std::collections::HashSet;

use rand::Rng;

use super::genome::{ConnectionGene, Genome, NodeKind};
use super::innovation::InnovationRegistry;
use super::NeatParams;

/// Which of the five operators fired during [`mutate`]. A flag is set when
/// the operator was selected by its probability, whether or not it found
/// anything to change.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MutationReport {
    pub add_link: bool,
    pub add_node: bool,
    pub weight_shift: bool,
    pub weight_random: bool,
    pub toggle_link: bool,
}

pub(crate) fn uniform_symmetric<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> f64 {
    if half_width > 0.0 {
        rng.random_range(-half_width..=half_width)
    } else {
        0.0
    }
}

/// Adds one enabled link between a previously unconnected legal pair.
///
/// Every legal `(from, to)` pair is enumerated and one is drawn uniformly;
/// `from` is an input or hidden node, `to` a hidden or output node, and the
/// link must not close a cycle over enabled connections. Returns `false`
/// (genome untouched) when the genome is saturated.
pub fn mutate_add_link<R: Rng + ?Sized>(
    g: &mut Genome,
    reg: &mut InnovationRegistry,
    weight_range: f64,
    rng: &mut R,
) -> bool {
    let adj = g.enabled_adjacency();
    let n = g.nodes().len();
    let existing: HashSet<(u32, u32)> = g.connections().iter().map(|c| (c.from, c.to)).collect();

    let mut candidates = Vec::new();
    let mut reach = vec![false; n];
    let mut stack = Vec::new();
    for (ti, target) in g.nodes().iter().enumerate() {
        if target.kind == NodeKind::Input {
            continue;
        }
        reach.iter_mut().for_each(|r| *r = false);
        stack.clear();
        stack.push(ti);
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut reach[v], true) {
                stack.extend(adj[v].iter().copied());
            }
        }
        for (fi, source) in g.nodes().iter().enumerate() {
            if source.kind == NodeKind::Output || reach[fi] {
                continue;
            }
            if !existing.contains(&(source.id, target.id)) {
                candidates.push((source.id, target.id));
            }
        }
    }
    if candidates.is_empty() {
        return false;
    }
    let (from, to) = candidates[rng.random_range(0..candidates.len())];
    let innovation = reg.link_innovation(from, to);
    let weight = uniform_symmetric(rng, weight_range);
    g.insert_connection(ConnectionGene { from, to, weight, enabled: true, innovation });
    true
}

/// Splits a random enabled connection `a -> b` into `a -> m` (weight 1.0)
/// and `m -> b` (the old weight), disabling the original.
pub fn mutate_add_node<R: Rng + ?Sized>(g: &mut Genome, reg: &mut InnovationRegistry, rng: &mut R) -> bool {
    let enabled: Vec<usize> = g.connections().iter().enumerate().filter(|(_, c)| c.enabled).map(|(i, _)| i).collect();
    if enabled.is_empty() {
        return false;
    }
    let idx = enabled[rng.random_range(0..enabled.len())];
    let old = g.connections()[idx];
    let middle = reg.split_node(old.innovation, g);
    g.connections_mut()[idx].enabled = false;
    g.insert_node(middle, NodeKind::Hidden);
    let first = reg.link_innovation(old.from, middle);
    let second = reg.link_innovation(middle, old.to);
    g.insert_connection(ConnectionGene { from: old.from, to: middle, weight: 1.0, enabled: true, innovation: first });
    g.insert_connection(ConnectionGene {
        from: middle,
        to: old.to,
        weight: old.weight,
        enabled: true,
        innovation: second,
    });
    true
}

/// Adds `u ~ U[-strength, strength]` to one random connection weight.
pub fn mutate_weight_shift<R: Rng + ?Sized>(g: &mut Genome, strength: f64, rng: &mut R) -> bool {
    if g.connections().is_empty() {
        return false;
    }
    let idx = rng.random_range(0..g.connections().len());
    let delta = uniform_symmetric(rng, strength);
    g.connections_mut()[idx].weight += delta;
    true
}

/// Replaces one random connection weight with a draw from `U[-range, range]`.
pub fn mutate_weight_random<R: Rng + ?Sized>(g: &mut Genome, range: f64, rng: &mut R) -> bool {
    if g.connections().is_empty() {
        return false;
    }
    let idx = rng.random_range(0..g.connections().len());
    g.connections_mut()[idx].weight = uniform_symmetric(rng, range);
    true
}

/// Flips the enabled flag of connection `index`. Re-enabling is refused when
/// it would close a cycle among enabled connections.
pub fn toggle_connection(g: &mut Genome, index: usize) -> bool {
    let Some(&c) = g.connections().get(index) else {
        return false;
    };
    if !c.enabled && g.would_create_cycle(c.from, c.to) {
        return false;
    }
    g.connections_mut()[index].enabled = !c.enabled;
    true
}

pub fn mutate_toggle_link<R: Rng + ?Sized>(g: &mut Genome, rng: &mut R) -> bool {
    if g.connections().is_empty() {
        return false;
    }
    let idx = rng.random_range(0..g.connections().len());
    toggle_connection(g, idx)
}

/// Applies each of the five operators independently with its probability,
/// in the order link, node, weight shift, weight replace, toggle.
pub fn mutate<R: Rng + ?Sized>(
    g: &mut Genome,
    reg: &mut InnovationRegistry,
    params: &NeatParams,
    rng: &mut R,
) -> MutationReport {
    let mut report = MutationReport::default();
    if rng.random_bool(params.prob_add_link) {
        report.add_link = true;
        mutate_add_link(g, reg, params.weight_random_strength, rng);
    }
    if rng.random_bool(params.prob_add_node) {
        report.add_node = true;
        mutate_add_node(g, reg, rng);
    }
    if rng.random_bool(params.prob_weight_shift) {
        report.weight_shift = true;
        mutate_weight_shift(g, params.weight_shift_strength, rng);
    }
    if rng.random_bool(params.prob_weight_random) {
        report.weight_random = true;
        mutate_weight_random(g, params.weight_random_strength, rng);
    }
    if rng.random_bool(params.prob_toggle_link) {
        report.toggle_link = true;
        mutate_toggle_link(g, rng);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neat::genome::tests::genome_with;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn first_link_gets_innovation_one() {
        let mut g = Genome::new(2, 1).unwrap();
        let mut reg = InnovationRegistry::new(2, 1);
        assert!(mutate_add_link(&mut g, &mut reg, 1.0, &mut rng(1)));
        assert_eq!(g.connections().len(), 1);
        let c = g.connections()[0];
        assert_eq!(c.innovation, 1);
        assert!(c.enabled && (-1.0..=1.0).contains(&c.weight));
        g.validate().unwrap();
    }

    #[test]
    fn same_link_in_two_genomes_shares_innovation() {
        let mut reg = InnovationRegistry::new(1, 1);
        let mut a = Genome::new(1, 1).unwrap();
        let mut b = Genome::new(1, 1).unwrap();
        // 1-in/1-out has a single legal pair.
        mutate_add_link(&mut a, &mut reg, 1.0, &mut rng(3));
        mutate_add_link(&mut b, &mut reg, 1.0, &mut rng(4));
        assert_eq!(a.connections()[0].innovation, b.connections()[0].innovation);
    }

    #[test]
    fn saturated_genome_is_untouched() {
        let mut g = genome_with(1, 1, &[(0, 1, 0.3, true, 1)]);
        let mut reg = InnovationRegistry::new(1, 1);
        let before = g.clone();
        assert!(!mutate_add_link(&mut g, &mut reg, 1.0, &mut rng(0)));
        assert_eq!(g, before);
    }

    #[test]
    fn add_node_splits_connection() {
        let mut reg = InnovationRegistry::new(1, 1);
        reg.link_innovation(0, 1);
        let mut g = genome_with(1, 1, &[(0, 1, 0.7, true, 1)]);
        let mut h = g.clone();
        assert!(mutate_add_node(&mut g, &mut reg, &mut rng(0)));
        assert_eq!(g.hidden_count(), 1);
        let m = 2;
        assert!(!g.find_connection(0, 1).unwrap().enabled);
        assert_eq!(g.find_connection(0, m).unwrap().weight, 1.0);
        assert_eq!(g.find_connection(m, 1).unwrap().weight, 0.7);
        g.validate().unwrap();
        // Same split elsewhere: same middle node and innovations.
        assert!(mutate_add_node(&mut h, &mut reg, &mut rng(9)));
        assert_eq!(g.connections(), h.connections());
    }

    #[test]
    fn add_node_needs_enabled_connection() {
        let mut reg = InnovationRegistry::new(1, 1);
        let mut g = genome_with(1, 1, &[(0, 1, 0.7, false, 1)]);
        let before = g.clone();
        assert!(!mutate_add_node(&mut g, &mut reg, &mut rng(0)));
        assert_eq!(g, before);
    }

    #[test]
    fn weight_shift_bounds() {
        let mut r = rng(5);
        for _ in 0..1000 {
            let mut g = genome_with(1, 1, &[(0, 1, 0.5, true, 1)]);
            assert!(mutate_weight_shift(&mut g, 0.4, &mut r));
            let w = g.connections()[0].weight;
            assert!((0.1 - 1e-12..=0.9 + 1e-12).contains(&w), "{w}");
        }
        let mut g = genome_with(1, 1, &[(0, 1, 0.5, true, 1)]);
        mutate_weight_shift(&mut g, 0.0, &mut r);
        assert_eq!(g.connections()[0].weight, 0.5);
        let mut empty = Genome::new(1, 1).unwrap();
        assert!(!mutate_weight_shift(&mut empty, 0.4, &mut r));
    }

    #[test]
    fn weight_random_bounds() {
        let mut r = rng(6);
        for _ in 0..1000 {
            let mut g = genome_with(1, 1, &[(0, 1, 17.0, true, 1)]);
            mutate_weight_random(&mut g, 1.0, &mut r);
            assert!((-1.0..=1.0).contains(&g.connections()[0].weight));
        }
        let mut g = genome_with(1, 1, &[(0, 1, 17.0, true, 1)]);
        mutate_weight_random(&mut g, 0.0, &mut r);
        assert_eq!(g.connections()[0].weight, 0.0);
    }

    #[test]
    fn toggle_is_an_involution() {
        let mut g = genome_with(1, 1, &[(0, 1, 0.5, true, 1)]);
        let orig = g.clone();
        assert!(toggle_connection(&mut g, 0));
        assert!(!g.connections()[0].enabled);
        assert!(toggle_connection(&mut g, 0));
        assert_eq!(g, orig);
    }

    #[test]
    fn toggle_refuses_to_close_cycle() {
        // 2 -> 3 -> 4 enabled, 4 -> 2 disabled: re-enabling closes a 3-cycle.
        let mut g = genome_with(1, 1, &[(2, 3, 1.0, true, 1), (3, 4, 1.0, true, 2), (4, 2, 1.0, false, 3)]);
        let before = g.clone();
        assert!(!toggle_connection(&mut g, 2));
        assert_eq!(g, before);
    }

    #[test]
    fn zero_probabilities_leave_genome_alone() {
        let p = NeatParams {
            prob_add_link: 0.0,
            prob_add_node: 0.0,
            prob_weight_shift: 0.0,
            prob_weight_random: 0.0,
            prob_toggle_link: 0.0,
            ..NeatParams::default()
        };
        let mut g = genome_with(2, 1, &[(0, 2, 0.5, true, 1)]);
        let before = g.clone();
        let mut reg = InnovationRegistry::new(2, 1);
        let rep = mutate(&mut g, &mut reg, &p, &mut rng(1));
        assert_eq!(rep, MutationReport::default());
        assert_eq!(g, before);
    }

    #[test]
    fn unit_probabilities_fire_everything() {
        let p = NeatParams {
            prob_add_link: 1.0,
            prob_add_node: 1.0,
            prob_weight_shift: 1.0,
            prob_weight_random: 1.0,
            prob_toggle_link: 1.0,
            ..NeatParams::default()
        };
        let mut reg = InnovationRegistry::new(2, 1);
        reg.link_innovation(0, 2);
        let mut g = genome_with(2, 1, &[(0, 2, 0.5, true, 1)]);
        let rep = mutate(&mut g, &mut reg, &p, &mut rng(2));
        assert!(rep.add_link && rep.add_node && rep.weight_shift && rep.weight_random && rep.toggle_link);
        // One added link plus two from the split.
        assert_eq!(g.connections().len(), 4);
        assert_eq!(g.hidden_count(), 1);
        g.validate().unwrap();
    }

    #[test]
    fn add_node_frequency_matches_probability() {
        let p = NeatParams::default();
        let mut r = rng(77);
        let trials = 10_000;
        let mut hits = 0;
        for _ in 0..trials {
            let mut reg = InnovationRegistry::new(2, 1);
            reg.link_innovation(0, 2);
            let mut g = genome_with(2, 1, &[(0, 2, 0.5, true, 1)]);
            hits += mutate(&mut g, &mut reg, &p, &mut r).add_node as u32;
        }
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.3).abs() <= 0.02, "{freq}");
    }
}
