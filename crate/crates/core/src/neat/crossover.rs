use rand::Rng;

use super::genome::{ConnectionGene, Genome, NodeKind};
use super::NeatError;

/// Recombines two parents whose genes are lined up by innovation number.
///
/// `fitter` must have fitness >= `other` (the caller orders them). Matching
/// genes come from either parent with equal probability, or are weight
/// averaged when `blended`. Unmatched genes come from the fitter parent, or
/// from both when fitnesses are equal. Genes are inherited in innovation
/// order and any enabled gene that would close a cycle is inherited disabled.
pub fn crossover<R: Rng + ?Sized>(
    fitter: &Genome,
    other: &Genome,
    blended: bool,
    rng: &mut R,
) -> Result<Genome, NeatError> {
    if fitter.input_count() != other.input_count() || fitter.output_count() != other.output_count() {
        return Err(NeatError::ShapeMismatch(
            (fitter.input_count(), fitter.output_count()),
            (other.input_count(), other.output_count()),
        ));
    }
    let equal = fitter.fitness == other.fitness;
    let (a, b) = (fitter.connections(), other.connections());
    let mut inherited: Vec<ConnectionGene> = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.innovation == y.innovation => {
                let gene = if blended {
                    ConnectionGene { weight: 0.5 * (x.weight + y.weight), ..*x }
                } else if rng.random_bool(0.5) {
                    *x
                } else {
                    *y
                };
                inherited.push(gene);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x.innovation < y.innovation => {
                inherited.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                inherited.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                if equal {
                    inherited.push(*y);
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }

    let mut child = Genome::new(fitter.input_count(), fitter.output_count())?;
    let io = (fitter.input_count() + fitter.output_count()) as u32;
    for gene in &inherited {
        for id in [gene.from, gene.to] {
            if id >= io {
                child.insert_node(id, NodeKind::Hidden);
            }
        }
    }
    for mut gene in inherited {
        if gene.enabled && child.would_create_cycle(gene.from, gene.to) {
            gene.enabled = false;
        }
        child.insert_connection(gene);
    }
    Ok(child)
}
