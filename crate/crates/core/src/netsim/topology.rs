//! Network topology: nodes, quantum links and candidate paths.

use crate::error::{Error, Result};

/// Index of a node in the topology's node list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// Index of an edge in the topology's edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    /// End host; terminates requests, never swaps.
    Client,
    /// Repeater/switch; may appear in the interior of a service path.
    Switch,
}

#[derive(Debug, Clone)]
pub struct Node {
    pub name: String,
    pub role: NodeRole,
    /// Maximum number of entangled-qubit endpoints held at once;
    /// `None` is unlimited.
    pub memory: Option<u32>,
}

/// An undirected quantum link.
#[derive(Debug, Clone)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    /// Probability of generating one fresh entanglement per slot.
    pub p_gen: f64,
    /// Fidelity of a freshly generated entanglement.
    pub f0: f64,
}

impl Edge {
    pub fn touches(&self, n: NodeId) -> bool {
        self.a == n || self.b == n
    }

    pub fn other(&self, n: NodeId) -> Option<NodeId> {
        if self.a == n {
            Some(self.b)
        } else if self.b == n {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub struct Topology {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl Topology {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self> {
        let mut errors = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, n) in nodes.iter().enumerate() {
            if n.name.is_empty() {
                errors.push(format!("node {i} has an empty name"));
            }
            if !seen.insert(n.name.clone()) {
                errors.push(format!("duplicate node name '{}'", n.name));
            }
        }
        let mut pairs = std::collections::BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.a.0 >= nodes.len() || e.b.0 >= nodes.len() {
                errors.push(format!("edge {i} references an undefined node"));
                continue;
            }
            if e.a == e.b {
                errors.push(format!("edge {i} is a self-loop at '{}'", nodes[e.a.0].name));
            }
            let key = (e.a.min(e.b), e.a.max(e.b));
            if !pairs.insert(key) {
                errors.push(format!(
                    "duplicate edge between '{}' and '{}'",
                    nodes[e.a.0].name, nodes[e.b.0].name
                ));
            }
            if !(0.0..=1.0).contains(&e.p_gen) {
                errors.push(format!(
                    "edge '{}'–'{}': p_gen {} outside [0, 1]",
                    nodes[e.a.0].name, nodes[e.b.0].name, e.p_gen
                ));
            }
            if !(0.25..=1.0).contains(&e.f0) {
                errors.push(format!(
                    "edge '{}'–'{}': initial fidelity {} outside [1/4, 1]",
                    nodes[e.a.0].name, nodes[e.b.0].name, e.f0
                ));
            }
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors.join("; ")));
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.a.0].push((e.b, EdgeId(i)));
            adjacency[e.b.0].push((e.a, EdgeId(i)));
        }
        Ok(Topology { nodes, edges, adjacency })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.name == name).map(NodeId)
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.adjacency[a.0]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|(_, e)| *e)
    }

    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[n.0]
    }

    /// All simple paths from `src` to `dst` with at most `max_hops` edges
    /// and only switches in the interior, sorted by length then by node
    /// sequence.
    pub fn simple_paths(&self, src: NodeId, dst: NodeId, max_hops: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut nodes = vec![src];
        let mut edges = Vec::new();
        self.path_dfs(src, dst, max_hops, &mut nodes, &mut edges, &mut out);
        out.sort_by(|p, q| p.edges.len().cmp(&q.edges.len()).then_with(|| p.nodes.cmp(&q.nodes)));
        out
    }

    fn path_dfs(
        &self,
        at: NodeId,
        dst: NodeId,
        max_hops: usize,
        nodes: &mut Vec<NodeId>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) {
        if at == dst {
            out.push(Path { nodes: nodes.clone(), edges: edges.clone() });
            return;
        }
        if edges.len() == max_hops {
            return;
        }
        for &(next, edge) in &self.adjacency[at.0] {
            if nodes.contains(&next) {
                continue;
            }
            // Interior nodes must be switches; the destination may be a client.
            if next != dst && self.nodes[next.0].role != NodeRole::Switch {
                continue;
            }
            nodes.push(next);
            edges.push(edge);
            self.path_dfs(next, dst, max_hops, nodes, edges, out);
            nodes.pop();
            edges.pop();
        }
    }
}

/// A simple path, as the node sequence and the edges between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

/// A source–destination pair generating end-to-end entanglement requests.
#[derive(Debug, Clone)]
pub struct Commodity {
    pub id: u32,
    pub src: NodeId,
    pub dst: NodeId,
    /// Bernoulli request probability per slot.
    pub rate: f64,
}

pub fn validate_commodities(topology: &Topology, commodities: &[Commodity]) -> Result<()> {
    let mut errors = Vec::new();
    let mut ids = std::collections::BTreeSet::new();
    for c in commodities {
        if !ids.insert(c.id) {
            errors.push(format!("duplicate commodity id {}", c.id));
        }
        if c.src.0 >= topology.nodes().len() || c.dst.0 >= topology.nodes().len() {
            errors.push(format!("commodity {} references an undefined node", c.id));
            continue;
        }
        if c.src == c.dst {
            errors.push(format!("commodity {} has identical endpoints", c.id));
        }
        for end in [c.src, c.dst] {
            if topology.node(end).role != NodeRole::Client {
                errors.push(format!(
                    "commodity {}: endpoint '{}' is not a client",
                    c.id,
                    topology.node(end).name
                ));
            }
        }
        if !(0.0..=1.0).contains(&c.rate) {
            errors.push(format!("commodity {}: rate {} outside [0, 1]", c.id, c.rate));
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(errors.join("; ")))
    }
}

/// Precomputed candidate paths per commodity (indexed by commodity
/// position).
#[derive(Debug, Clone)]
pub struct CandidatePaths {
    per_commodity: Vec<Vec<Path>>,
}

impl CandidatePaths {
    pub fn build(topology: &Topology, commodities: &[Commodity], max_hops: usize) -> Self {
        let per_commodity = commodities
            .iter()
            .map(|c| topology.simple_paths(c.src, c.dst, max_hops))
            .collect();
        CandidatePaths { per_commodity }
    }

    pub fn for_commodity(&self, index: usize) -> &[Path] {
        &self.per_commodity[index]
    }
}
