//! Compiles a [`Genome`] into a feed-forward network and runs it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::neat::{Genome, NodeKind};

#[derive(Debug, Error, PartialEq)]
pub enum PhenotypeError {
    #[error("genome contains a cycle over enabled connections")]
    Cycle,
    #[error("expected {expected} inputs, got {got}")]
    InputLength { expected: usize, got: usize },
    #[error("cannot select an action from an empty output vector")]
    NoOutputs,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Tanh,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
        }
    }
}

/// Executable network. Node values live in a flat buffer: inputs first, then
/// every other node in topological order. Incoming edges are stored in CSR form.
#[derive(Debug, Clone)]
pub struct Network {
    input_count: usize,
    output_count: usize,
    node_count: usize,
    /// `edge_start[k]..edge_start[k + 1]` are the edges feeding computed node `k`.
    edge_start: Vec<usize>,
    edge_source: Vec<usize>,
    edge_weight: Vec<f64>,
    /// Buffer slot of each output node, in output-id order.
    outputs: Vec<usize>,
    activation: Activation,
}

impl Network {
    pub fn build(genome: &Genome) -> Result<Self, PhenotypeError> {
        Self::build_with(genome, Activation::Tanh)
    }

    pub fn build_with(genome: &Genome, activation: Activation) -> Result<Self, PhenotypeError> {
        let order = genome.topological_order().ok_or(PhenotypeError::Cycle)?;
        let inputs = genome.input_count();
        // Slot for every node id: inputs keep their id, the rest follow the order.
        let max_id = genome.nodes().last().map_or(0, |n| n.id as usize);
        let mut slot = vec![usize::MAX; max_id + 1];
        for (i, s) in slot.iter_mut().enumerate().take(inputs) {
            *s = i;
        }
        let computed: Vec<u32> =
            order.into_iter().filter(|&id| genome.node_kind(id) != Some(NodeKind::Input)).collect();
        for (k, &id) in computed.iter().enumerate() {
            slot[id as usize] = inputs + k;
        }
        let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); computed.len()];
        for c in genome.connections().iter().filter(|c| c.enabled) {
            incoming[slot[c.to as usize] - inputs].push((slot[c.from as usize], c.weight));
        }
        let mut edge_start = Vec::with_capacity(computed.len() + 1);
        let mut edge_source = Vec::new();
        let mut edge_weight = Vec::new();
        edge_start.push(0);
        for edges in incoming {
            for (s, w) in edges {
                edge_source.push(s);
                edge_weight.push(w);
            }
            edge_start.push(edge_source.len());
        }
        let outputs = (0..genome.output_count()).map(|o| slot[inputs + o]).collect();
        Ok(Self {
            input_count: inputs,
            output_count: genome.output_count(),
            node_count: inputs + computed.len(),
            edge_start,
            edge_source,
            edge_weight,
            outputs,
            activation,
        })
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn output_count(&self) -> usize {
        self.output_count
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn activate(&self, inputs: &[f64]) -> Result<Vec<f64>, PhenotypeError> {
        let mut scratch = Vec::new();
        let mut out = vec![0.0; self.output_count];
        self.activate_into(inputs, &mut scratch, &mut out)?;
        Ok(out)
    }

    /// Allocation-free activation; `scratch` is resized as needed.
    pub fn activate_into(&self, inputs: &[f64], scratch: &mut Vec<f64>, out: &mut [f64]) -> Result<(), PhenotypeError> {
        if inputs.len() != self.input_count {
            return Err(PhenotypeError::InputLength { expected: self.input_count, got: inputs.len() });
        }
        scratch.clear();
        scratch.resize(self.node_count, 0.0);
        scratch[..self.input_count].copy_from_slice(inputs);
        for k in 0..self.node_count - self.input_count {
            let mut sum = 0.0;
            for e in self.edge_start[k]..self.edge_start[k + 1] {
                sum += self.edge_weight[e] * scratch[self.edge_source[e]];
            }
            scratch[self.input_count + k] = self.activation.apply(sum);
        }
        for (o, &s) in out.iter_mut().zip(&self.outputs) {
            *o = scratch[s];
        }
        Ok(())
    }
}

/// Index of the largest output; ties go to the lowest index.
pub fn select_action(outputs: &[f64]) -> Result<usize, PhenotypeError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in outputs.iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i).ok_or(PhenotypeError::NoOutputs)
}
