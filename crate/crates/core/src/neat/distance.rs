use super::genome::Genome;
use super::NeatParams;

/// Gene counts from lining up two genomes by innovation number.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GeneAlignment {
    pub matching: usize,
    pub disjoint: usize,
    pub excess: usize,
    /// Sum of |weight difference| over matching genes.
    pub weight_diff_sum: f64,
}

impl GeneAlignment {
    pub fn mean_weight_diff(&self) -> f64 {
        if self.matching == 0 {
            0.0
        } else {
            self.weight_diff_sum / self.matching as f64
        }
    }
}

/// A gene is excess when its innovation exceeds the other genome's largest
/// innovation, disjoint when it is unmatched inside that range.
pub fn align(a: &Genome, b: &Genome) -> GeneAlignment {
    let (ca, cb) = (a.connections(), b.connections());
    let (max_a, max_b) = (a.max_innovation(), b.max_innovation());
    let mut out = GeneAlignment::default();
    let mut unmatched = |innov: u64, other_max: u64| {
        if innov > other_max {
            out.excess += 1;
        } else {
            out.disjoint += 1;
        }
    };
    let (mut i, mut j) = (0, 0);
    let mut matching = 0;
    let mut diff = 0.0;
    while i < ca.len() && j < cb.len() {
        let (x, y) = (&ca[i], &cb[j]);
        if x.innovation == y.innovation {
            matching += 1;
            diff += (x.weight - y.weight).abs();
            i += 1;
            j += 1;
        } else if x.innovation < y.innovation {
            unmatched(x.innovation, max_b);
            i += 1;
        } else {
            unmatched(y.innovation, max_a);
            j += 1;
        }
    }
    for x in &ca[i..] {
        unmatched(x.innovation, max_b);
    }
    for y in &cb[j..] {
        unmatched(y.innovation, max_a);
    }
    out.matching = matching;
    out.weight_diff_sum = diff;
    out
}

/// `c1*E/N + c2*D/N + c3*W`, with `N` the larger connection count, or 1 when
/// both genomes have fewer than 20 connections.
pub fn compatibility_distance(a: &Genome, b: &Genome, params: &NeatParams) -> f64 {
    let al = align(a, b);
    let larger = a.connections().len().max(b.connections().len());
    let n = if larger < 20 { 1.0 } else { larger as f64 };
    params.c1 * al.excess as f64 / n + params.c2 * al.disjoint as f64 / n + params.c3 * al.mean_weight_diff()
}
