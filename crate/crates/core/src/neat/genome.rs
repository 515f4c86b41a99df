use std::fmt::Write as _;

use super::NeatError;

pub type NodeId = u32;
pub type Innovation = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Input,
    Output,
    Hidden,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Input => "input",
            NodeKind::Output => "output",
            NodeKind::Hidden => "hidden",
        }
    }
}

impl std::str::FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "input" => Ok(NodeKind::Input),
            "output" => Ok(NodeKind::Output),
            "hidden" => Ok(NodeKind::Hidden),
            other => Err(format!("unknown node kind '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeGene {
    pub id: NodeId,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionGene {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: f64,
    pub enabled: bool,
    pub innovation: Innovation,
}

/// A network genotype.
///
/// Node ids `0..input_count` are inputs and `input_count..input_count + output_count`
/// are outputs; hidden ids come from the [`InnovationRegistry`](super::InnovationRegistry).
/// Nodes are kept sorted by id and connections sorted by innovation number.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    nodes: Vec<NodeGene>,
    connections: Vec<ConnectionGene>,
    input_count: usize,
    output_count: usize,
    /// Last assigned fitness.
    pub fitness: f64,
    /// Number of fitness assignments received so far.
    pub evaluations: u32,
    /// Creation order within the owning population; breaks fitness ties.
    pub creation_index: u64,
}

impl Genome {
    /// A genome with only input and output nodes and no connections.
    pub fn new(input_count: usize, output_count: usize) -> Result<Self, NeatError> {
        if input_count == 0 || output_count == 0 {
            return Err(NeatError::InvalidShape { inputs: input_count, outputs: output_count });
        }
        let nodes = (0..input_count + output_count)
            .map(|i| NodeGene {
                id: i as NodeId,
                kind: if i < input_count { NodeKind::Input } else { NodeKind::Output },
            })
            .collect();
        Ok(Self {
            nodes,
            connections: Vec::new(),
            input_count,
            output_count,
            fitness: 0.0,
            evaluations: 0,
            creation_index: 0,
        })
    }

    /// Builds and validates a genome from explicit connection genes; hidden
    /// endpoints are created as needed.
    pub fn from_connections(
        input_count: usize,
        output_count: usize,
        genes: &[ConnectionGene],
    ) -> Result<Self, NeatError> {
        let mut g = Genome::new(input_count, output_count)?;
        let io = (input_count + output_count) as NodeId;
        for gene in genes {
            for id in [gene.from, gene.to] {
                if id >= io {
                    g.insert_node(id, NodeKind::Hidden);
                }
            }
        }
        let mut sorted = genes.to_vec();
        sorted.sort_by_key(|c| c.innovation);
        g.connections = sorted;
        g.validate()?;
        Ok(g)
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn output_count(&self) -> usize {
        self.output_count
    }

    pub fn nodes(&self) -> &[NodeGene] {
        &self.nodes
    }

    pub fn connections(&self) -> &[ConnectionGene] {
        &self.connections
    }

    pub(crate) fn connections_mut(&mut self) -> &mut [ConnectionGene] {
        &mut self.connections
    }

    pub fn hidden_count(&self) -> usize {
        self.nodes.len() - self.input_count - self.output_count
    }

    pub fn max_innovation(&self) -> Innovation {
        self.connections.last().map_or(0, |c| c.innovation)
    }

    pub(crate) fn node_index(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    pub fn has_node(&self, id: NodeId) -> bool {
        self.node_index(id).is_some()
    }

    pub fn node_kind(&self, id: NodeId) -> Option<NodeKind> {
        self.node_index(id).map(|i| self.nodes[i].kind)
    }

    pub fn find_connection(&self, from: NodeId, to: NodeId) -> Option<&ConnectionGene> {
        self.connections.iter().find(|c| c.from == from && c.to == to)
    }

    pub(crate) fn insert_node(&mut self, id: NodeId, kind: NodeKind) {
        if let Err(pos) = self.nodes.binary_search_by_key(&id, |n| n.id) {
            self.nodes.insert(pos, NodeGene { id, kind });
        }
    }

    /// Inserts keeping innovation order. Callers guarantee endpoint existence
    /// and (from, to) uniqueness.
    pub(crate) fn insert_connection(&mut self, gene: ConnectionGene) {
        let pos = self.connections.partition_point(|c| c.innovation < gene.innovation);
        self.connections.insert(pos, gene);
    }

    /// Resets evolutionary bookkeeping so the genome looks freshly created.
    pub(crate) fn reset_stats(&mut self) {
        self.fitness = 0.0;
        self.evaluations = 0;
    }

    /// Adjacency over enabled connections as node-index lists.
    pub(crate) fn enabled_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for c in self.connections.iter().filter(|c| c.enabled) {
            if let (Some(f), Some(t)) = (self.node_index(c.from), self.node_index(c.to)) {
                adj[f].push(t);
            }
        }
        adj
    }

    /// True if `to` already reaches `from` through enabled connections, so
    /// an enabled `from -> to` link would close a cycle.
    pub fn would_create_cycle(&self, from: NodeId, to: NodeId) -> bool {
        if from == to {
            return true;
        }
        let (Some(f), Some(t)) = (self.node_index(from), self.node_index(to)) else {
            return false;
        };
        reaches(&self.enabled_adjacency(), t, f)
    }

    /// Kahn topological sort of the enabled graph; `None` when cyclic.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let adj = self.enabled_adjacency();
        let mut indegree = vec![0usize; self.nodes.len()];
        for targets in &adj {
            for &t in targets {
                indegree[t] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..self.nodes.len()).filter(|&i| indegree[i] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(i) = ready.pop() {
            order.push(self.nodes[i].id);
            for &t in adj[i].iter().rev() {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(t);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Checks every structural invariant of a genome.
    pub fn validate(&self) -> Result<(), NeatError> {
        let bad = |m: String| Err(NeatError::Invariant(m));
        if self.input_count == 0 || self.output_count == 0 {
            return bad("missing input or output nodes".into());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 && self.nodes[i - 1].id >= n.id {
                return bad(format!("node ids not strictly increasing at {}", n.id));
            }
            let expected = if (n.id as usize) < self.input_count {
                NodeKind::Input
            } else if (n.id as usize) < self.input_count + self.output_count {
                NodeKind::Output
            } else {
                NodeKind::Hidden
            };
            if n.kind != expected {
                return bad(format!("node {} has kind {:?}, expected {:?}", n.id, n.kind, expected));
            }
        }
        if self.nodes.len() < self.input_count + self.output_count {
            return bad("input/output nodes missing".into());
        }
        let mut pairs = std::collections::HashSet::new();
        for (i, c) in self.connections.iter().enumerate() {
            if c.innovation == 0 {
                return bad("innovation numbers start at 1".into());
            }
            if i > 0 && self.connections[i - 1].innovation >= c.innovation {
                return bad(format!("connections not ordered by innovation at {}", c.innovation));
            }
            match (self.node_kind(c.from), self.node_kind(c.to)) {
                (Some(fk), Some(tk)) => {
                    if fk == NodeKind::Output || tk == NodeKind::Input {
                        return bad(format!("connection {} -> {} breaks feed-forward", c.from, c.to));
                    }
                }
                _ => return bad(format!("connection {} -> {} has a dangling endpoint", c.from, c.to)),
            }
            if !pairs.insert((c.from, c.to)) {
                return bad(format!("duplicate connection {} -> {}", c.from, c.to));
            }
            if !c.weight.is_finite() {
                return bad(format!("non-finite weight on {} -> {}", c.from, c.to));
            }
        }
        if !self.is_acyclic() {
            return bad("enabled connections contain a cycle".into());
        }
        Ok(())
    }

    /// Line-oriented text dump: `node <id> <kind>` then
    /// `conn <from> <to> <weight> <enabled> <innovation>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let _ = writeln!(out, "node {} {}", n.id, n.kind.as_str());
        }
        for c in &self.connections {
            let _ = writeln!(out, "conn {} {} {:?} {} {}", c.from, c.to, c.weight, c.enabled, c.innovation);
        }
        out
    }

    /// Parses [`Genome::to_text`] output. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self, NeatError> {
        let mut nodes = Vec::new();
        let mut conns = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |reason: String| NeatError::Parse { line: lineno + 1, reason };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["node", id, kind] => {
                    let id = id.parse::<NodeId>().map_err(|e| perr(e.to_string()))?;
                    let kind = kind.parse::<NodeKind>().map_err(perr)?;
                    nodes.push(NodeGene { id, kind });
                }
                ["conn", from, to, weight, enabled, innovation] => conns.push(ConnectionGene {
                    from: from.parse().map_err(|e: std::num::ParseIntError| perr(e.to_string()))?,
                    to: to.parse().map_err(|e: std::num::ParseIntError| perr(e.to_string()))?,
                    weight: weight.parse().map_err(|e: std::num::ParseFloatError| perr(e.to_string()))?,
                    enabled: enabled.parse().map_err(|e: std::str::ParseBoolError| perr(e.to_string()))?,
                    innovation: innovation.parse().map_err(|e: std::num::ParseIntError| perr(e.to_string()))?,
                }),
                _ => return Err(perr(format!("unrecognized line '{line}'"))),
            }
        }
        nodes.sort_by_key(|n| n.id);
        conns.sort_by_key(|c| c.innovation);
        let input_count = nodes.iter().filter(|n| n.kind == NodeKind::Input).count();
        let output_count = nodes.iter().filter(|n| n.kind == NodeKind::Output).count();
        let genome = Genome {
            nodes,
            connections: conns,
            input_count,
            output_count,
            fitness: 0.0,
            evaluations: 0,
            creation_index: 0,
        };
        genome.validate()?;
        Ok(genome)
    }
}

/// Depth-first reachability over an index adjacency list.
pub(crate) fn reaches(adj: &[Vec<usize>], start: usize, target: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        if n == target {
            return true;
        }
        if std::mem::replace(&mut seen[n], true) {
            continue;
        }
        stack.extend(adj[n].iter().copied().filter(|&m| !seen[m]));
    }
    false
}
