mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{grow_genome, oracle_distance};
use rhneat_core::neat::{
    compatibility_distance, crossover, discard_count, mutate, mutate_add_link, mutate_add_node, mutate_toggle_link,
    mutate_weight_random, mutate_weight_shift, Genome, InnovationRegistry, NeatParams, Population,
};

fn link_table(genomes: &[Genome]) -> HashMap<(u32, u32), u64> {
    let mut seen = HashMap::new();
    for g in genomes {
        for c in g.connections() {
            let prev = *seen.entry((c.from, c.to)).or_insert(c.innovation);
            assert_eq!(prev, c.innovation, "link {:?} carries two innovations", (c.from, c.to));
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn innovation_numbers_are_consistent(seed in any::<u64>(), genomes in 2usize..6, steps in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reg = InnovationRegistry::new(3, 2);
        let mut pop: Vec<Genome> = (0..genomes).map(|_| Genome::new(3, 2).unwrap()).collect();
        for _ in 0..steps {
            let i = rng.random_range(0..pop.len());
            mutate(&mut pop[i], &mut reg, &NeatParams::default(), &mut rng);
        }
        link_table(&pop);
        for g in &pop {
            for c in g.connections() {
                prop_assert_eq!(reg.lookup_link(c.from, c.to), Some(c.innovation));
            }
        }
    }

    #[test]
    fn genomes_stay_acyclic_and_valid(seed in any::<u64>(), steps in 0usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reg = InnovationRegistry::new(2, 2);
        let g = grow_genome(&mut reg, 2, 2, steps, 40, &mut rng);
        prop_assert!(g.is_acyclic());
        prop_assert!(g.validate().is_ok());
        let round = Genome::from_text(&g.to_text()).unwrap();
        prop_assert_eq!(round.connections(), g.connections());
        prop_assert_eq!(round.nodes(), g.nodes());
    }

    #[test]
    fn distance_is_a_symmetric_nonnegative_oracle_match(seed in any::<u64>(), sa in 0usize..60, sb in 0usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reg = InnovationRegistry::new(3, 2);
        let a = grow_genome(&mut reg, 3, 2, sa, 30, &mut rng);
        let b = grow_genome(&mut reg, 3, 2, sb, 30, &mut rng);
        let p = NeatParams { c1: rng.random_range(0.0..3.0), c2: rng.random_range(0.0..3.0), c3: rng.random_range(0.0..3.0), ..NeatParams::default() };
        let d = compatibility_distance(&a, &b, &p);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d, compatibility_distance(&b, &a, &p));
        prop_assert_eq!(compatibility_distance(&a, &a, &p), 0.0);
        prop_assert!((d - oracle_distance(&a, &b, p.c1, p.c2, p.c3)).abs() <= 1e-12);
    }

    #[test]
    fn crossover_children_stay_within_parents(seed in any::<u64>(), sa in 0usize..50, sb in 0usize..50, blended in any::<bool>(), equal in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reg = InnovationRegistry::new(2, 3);
        let mut a = grow_genome(&mut reg, 2, 3, sa, 30, &mut rng);
        let mut b = grow_genome(&mut reg, 2, 3, sb, 30, &mut rng);
        a.fitness = 2.0;
        b.fitness = if equal { 2.0 } else { 1.0 };
        let child = crossover(&a, &b, blended, &mut rng).unwrap();
        let parents: BTreeSet<u64> = a.connections().iter().chain(b.connections()).map(|c| c.innovation).collect();
        let fitter: BTreeSet<u64> = a.connections().iter().map(|c| c.innovation).collect();
        let genes: BTreeSet<u64> = child.connections().iter().map(|c| c.innovation).collect();
        prop_assert!(genes.is_subset(&parents));
        if equal {
            prop_assert_eq!(&genes, &parents);
        } else {
            prop_assert_eq!(&genes, &fitter);
        }
        prop_assert!(child.validate().is_ok());
        prop_assert!(child.is_acyclic());
    }

    #[test]
    fn evolve_generation_conserves_size(seed in any::<u64>(), size in 2usize..16, gens in 1usize..8, speciation in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pop = Population::new(size, 3, 2, speciation).unwrap();
        let params = NeatParams { population_size: size, compatibility_threshold: 0.5, ..NeatParams::default() };
        for _ in 0..gens {
            let mut r2 = ChaCha8Rng::seed_from_u64(rng.random());
            let report = pop.evolve_generation(&params, &mut rng, |g| g.fitness = r2.random_range(-5.0..5.0));
            prop_assert_eq!(pop.genomes().len(), size);
            prop_assert_eq!(report.offspring.len(), report.discarded.len());
            for g in pop.genomes() {
                prop_assert!(g.validate().is_ok());
            }
            if speciation {
                let members: usize = pop.species().iter().map(|s| s.members.len()).sum();
                prop_assert_eq!(members, size);
            } else {
                prop_assert_eq!(pop.species_count(), 1);
            }
        }
    }

    #[test]
    fn discard_count_rounds_up_and_keeps_one(size in 1usize..200, rate in 0.0f64..1.0) {
        let d = discard_count(size, rate);
        prop_assert!(d < size);
        prop_assert!(d as f64 >= ((rate * size as f64).ceil()).min((size - 1) as f64));
    }
}

#[test]
fn same_structural_mutation_gets_same_innovation() {
    let mut reg = InnovationRegistry::new(2, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut a = Genome::new(2, 1).unwrap();
    let mut b = Genome::new(2, 1).unwrap();
    // With a single legal target both genomes are steered to the same link.
    while a.connections().is_empty() {
        mutate_add_link(&mut a, &mut reg, 1.0, &mut rng);
    }
    let first = a.connections()[0];
    loop {
        let mut trial = b.clone();
        mutate_add_link(&mut trial, &mut reg, 1.0, &mut rng);
        if trial.connections()[0].from == first.from {
            b = trial;
            break;
        }
    }
    assert_eq!(b.connections()[0].innovation, first.innovation);
    assert_eq!(first.innovation, 1);
    mutate_add_node(&mut a, &mut reg, &mut rng);
    mutate_add_node(&mut b, &mut reg, &mut rng);
    assert_eq!(a.hidden_count(), 1);
    assert_eq!(a.nodes(), b.nodes());
    let innovations = |g: &Genome| g.connections().iter().map(|c| c.innovation).collect::<Vec<_>>();
    assert_eq!(innovations(&a), innovations(&b));
}

/// Kolmogorov-Smirnov statistic of `xs` against the uniform CDF on `[lo, hi]`.
fn ks_uniform(mut xs: Vec<f64>, lo: f64, hi: f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Critical value for p = 0.01 in the large-sample limit.
fn ks_critical(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

fn one_link(w: f64) -> Genome {
    let mut reg = InnovationRegistry::new(1, 1);
    let mut g = Genome::new(1, 1).unwrap();
    mutate_add_link(&mut g, &mut reg, 0.0, &mut ChaCha8Rng::seed_from_u64(0));
    let mut text = g.to_text();
    text = text.replace("0.0 true", &format!("{w:?} true"));
    Genome::from_text(&text).unwrap()
}

#[test]
fn weight_shift_is_uniform_around_the_old_weight() {
    let base = one_link(0.5);
    assert_eq!(base.connections()[0].weight, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let draws: Vec<f64> = (0..100_000)
        .map(|_| {
            let mut g = base.clone();
            mutate_weight_shift(&mut g, 0.4, &mut rng);
            g.connections()[0].weight
        })
        .collect();
    assert!(draws.iter().all(|w| (0.1 - 1e-12..=0.9 + 1e-12).contains(w)));
    let d = ks_uniform(draws, 0.1, 0.9);
    assert!(d < ks_critical(100_000), "KS statistic {d}");

    let mut g = base.clone();
    mutate_weight_shift(&mut g, 0.0, &mut rng);
    assert_eq!(g.connections()[0].weight, 0.5);
}

#[test]
fn weight_random_is_uniform_on_the_range() {
    let base = one_link(0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let draws: Vec<f64> = (0..100_000)
        .map(|_| {
            let mut g = base.clone();
            mutate_weight_random(&mut g, 1.0, &mut rng);
            g.connections()[0].weight
        })
        .collect();
    assert!(draws.iter().all(|w| (-1.0..=1.0).contains(w)));
    let d = ks_uniform(draws, -1.0, 1.0);
    assert!(d < ks_critical(100_000), "KS statistic {d}");

    let mut g = base;
    mutate_weight_random(&mut g, 0.0, &mut rng);
    assert_eq!(g.connections()[0].weight, 0.0);
}

#[test]
fn operator_frequencies_match_probabilities() {
    let params = NeatParams::default();
    let trials = 10_000;
    let mut counts = [0usize; 5];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut reg = InnovationRegistry::new(2, 2);
    let base = grow_genome(&mut reg, 2, 2, 10, 8, &mut rng);
    for _ in 0..trials {
        let mut g = base.clone();
        let r = mutate(&mut g, &mut reg, &params, &mut rng);
        for (c, hit) in counts.iter_mut().zip([r.add_link, r.add_node, r.weight_shift, r.weight_random, r.toggle_link])
        {
            *c += usize::from(hit);
        }
    }
    let probs = [
        params.prob_add_link,
        params.prob_add_node,
        params.prob_weight_shift,
        params.prob_weight_random,
        params.prob_toggle_link,
    ];
    for (c, p) in counts.iter().zip(probs) {
        let freq = *c as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() <= 2.0 * se + 1e-12 || (freq - p).abs() <= 0.02, "p={p} observed {freq}");
    }
    let add_node = counts[1] as f64 / trials as f64;
    assert!((add_node - 0.3).abs() <= 0.02);
}

#[test]
fn forced_and_disabled_mutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut reg = InnovationRegistry::new(2, 2);
    let base = grow_genome(&mut reg, 2, 2, 12, 10, &mut rng);
    let off = NeatParams {
        prob_add_link: 0.0,
        prob_add_node: 0.0,
        prob_weight_shift: 0.0,
        prob_weight_random: 0.0,
        prob_toggle_link: 0.0,
        ..NeatParams::default()
    };
    let mut g = base.clone();
    let r = mutate(&mut g, &mut reg, &off, &mut rng);
    assert_eq!(g.to_text(), base.to_text());
    assert!(!(r.add_link || r.add_node || r.weight_shift || r.weight_random || r.toggle_link));
    let on = NeatParams {
        prob_add_link: 1.0,
        prob_add_node: 1.0,
        prob_weight_shift: 1.0,
        prob_weight_random: 1.0,
        prob_toggle_link: 1.0,
        ..NeatParams::default()
    };
    let r = mutate(&mut g, &mut reg, &on, &mut rng);
    assert!(r.add_link && r.add_node && r.weight_shift && r.weight_random && r.toggle_link);
    assert!(g.is_acyclic());
    let mut t = base.clone();
    mutate_toggle_link(&mut t, &mut rng);
    assert!(t.validate().is_ok());
}
