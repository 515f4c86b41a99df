use std::collections::HashMap;

use super::genome::{Genome, Innovation, NodeId};

/// Global bookkeeping for structural novelty within one population.
///
/// The same `(from, to)` link always maps to the same innovation number, and
/// splitting the same connection in different genomes yields the same middle
/// node (and therefore the same two new innovations).
#[derive(Debug, Clone)]
pub struct InnovationRegistry {
    next_innovation: Innovation,
    next_node_id: NodeId,
    links: HashMap<(NodeId, NodeId), Innovation>,
    splits: HashMap<Innovation, Vec<NodeId>>,
}

impl InnovationRegistry {
    pub fn new(input_count: usize, output_count: usize) -> Self {
        Self {
            next_innovation: 1,
            next_node_id: (input_count + output_count) as NodeId,
            links: HashMap::new(),
            splits: HashMap::new(),
        }
    }

    pub fn next_innovation(&self) -> Innovation {
        self.next_innovation
    }

    pub fn next_node_id(&self) -> NodeId {
        self.next_node_id
    }

    pub fn known_links(&self) -> usize {
        self.links.len()
    }

    pub fn lookup_link(&self, from: NodeId, to: NodeId) -> Option<Innovation> {
        self.links.get(&(from, to)).copied()
    }

    /// Innovation number for a link, assigning a new one on first sight.
    pub fn link_innovation(&mut self, from: NodeId, to: NodeId) -> Innovation {
        *self.links.entry((from, to)).or_insert_with(|| {
            let innov = self.next_innovation;
            self.next_innovation += 1;
            innov
        })
    }

    /// Middle node for splitting connection `innovation` inside `genome`.
    ///
    /// Returns the first node previously registered for this split that the
    /// genome does not already contain; a genome re-splitting a re-enabled
    /// connection gets a fresh node.
    pub fn split_node(&mut self, innovation: Innovation, genome: &Genome) -> NodeId {
        let known = self.splits.entry(innovation).or_default();
        if let Some(&id) = known.iter().find(|&&id| !genome.has_node(id)) {
            return id;
        }
        let id = self.next_node_id;
        self.next_node_id += 1;
        known.push(id);
        id
    }
}
