//! Net graphs: one node per event, tagged with its signed conditions, and one
//! edge per pair of events that share condition nodes.

mod json;
pub(crate) mod parse;
mod transform;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use crate::label::Label;
use crate::petri::{Capacity, NetError};

pub use json::NetGraphJson;
pub use parse::{parse_edge_tagging, parse_node_rendering, ParseError};
pub use transform::{c_complexes, net_to_netgraph, netgraph_to_net};
pub use validate::{validate_netgraph, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetGraphError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("net {0:?} is not pure")]
    NotPure(String),
    #[error("net {0:?} has no events")]
    NoEvents(String),
    #[error("condition {0:?} is not attached to any event")]
    IsolatedCondition(String),
    #[error("event {event:?} shares two different conditions labeled {label:?}")]
    AmbiguousLabel { event: String, label: String },
    #[error("invalid tagging: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidTagging(Vec<Violation>),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Arc kind as seen from an event. Ordered `--` < `-` < `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// Inhibitor input.
    Inhibitor,
    Minus,
    Plus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Inhibitor => "--",
            Sign::Minus => "-",
            Sign::Plus => "+",
        }
    }

    /// True for arcs running condition to event.
    pub fn is_input(self) -> bool {
        self != Sign::Plus
    }
}

/// Sign plus arc weight at one event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub sign: Sign,
    pub weight: u32,
}

impl Port {
    pub fn new(sign: Sign) -> Self {
        Port { sign, weight: 1 }
    }

    pub fn weighted(sign: Sign, weight: u32) -> Self {
        Port { sign, weight }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.sign.as_str())?;
        if self.weight != 1 {
            write!(f, "{}", self.weight)?;
        }
        Ok(())
    }
}

/// One entry of a node tagging. Ordered by sign, label, capacity, weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedCondition {
    pub sign: Sign,
    pub label: Label,
    pub capacity: Capacity,
    pub weight: u32,
}

impl SignedCondition {
    pub fn new(sign: Sign, label: Label) -> Self {
        SignedCondition {
            sign,
            label,
            capacity: Capacity::Infinite,
            weight: 1,
        }
    }

    pub fn port(&self) -> Port {
        Port::weighted(self.sign, self.weight)
    }
}

impl fmt::Display for SignedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign.as_str(), self.label)?;
        if !self.capacity.is_infinite() || self.weight != 1 {
            write!(f, "({},{})", self.capacity, self.weight)?;
        }
        Ok(())
    }
}

/// A shared condition rendered from one end of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub front: Sign,
    pub label: Label,
    pub capacity: Capacity,
    pub front_weight: u32,
    pub rear: Sign,
    pub rear_weight: u32,
}

impl Triple {
    pub fn new(front: Port, label: Label, capacity: Capacity, rear: Port) -> Self {
        Triple {
            front: front.sign,
            label,
            capacity,
            front_weight: front.weight,
            rear: rear.sign,
            rear_weight: rear.weight,
        }
    }

    pub fn front_port(&self) -> Port {
        Port::weighted(self.front, self.front_weight)
    }

    pub fn rear_port(&self) -> Port {
        Port::weighted(self.rear, self.rear_weight)
    }

    pub fn flipped(&self) -> Triple {
        Triple::new(self.rear_port(), self.label.clone(), self.capacity, self.front_port())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}", self.front_port(), self.label)?;
        if let Capacity::Finite(k) = self.capacity {
            write!(f, "({k})")?;
        }
        write!(f, ",{})", self.rear_port())
    }
}

/// Edge tagging rendered in one direction; triples are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeTagging(pub Vec<Triple>);

impl EdgeTagging {
    pub fn from_unsorted(mut triples: Vec<Triple>) -> Self {
        triples.sort();
        EdgeTagging(triples)
    }

    pub fn flipped(&self) -> EdgeTagging {
        EdgeTagging::from_unsorted(self.0.iter().map(Triple::flipped).collect())
    }
}

impl fmt::Display for EdgeTagging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// Event label plus its node tagging, e.g. `v2(-c8,-c9,+c6)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRendering {
    pub label: Label,
    pub tagging: Vec<SignedCondition>,
}

impl fmt::Display for NodeRendering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        write_tagging(f, &self.tagging)
    }
}

fn write_tagging(f: &mut fmt::Formatter<'_>, tagging: &[SignedCondition]) -> fmt::Result {
    f.write_str("(")?;
    for (i, s) in tagging.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{s}")?;
    }
    f.write_str(")")
}

/// Renders a node tagging on its own, e.g. `(-c1,+c2)`.
pub fn render_tagging(tagging: &[SignedCondition]) -> String {
    struct T<'a>(&'a [SignedCondition]);
    impl fmt::Display for T<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_tagging(f, self.0)
        }
    }
    T(tagging).to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgNode {
    pub id: String,
    pub label: Label,
    /// Sorted.
    pub tagging: Vec<SignedCondition>,
}

impl NgNode {
    pub fn rendering(&self) -> NodeRendering {
        NodeRendering {
            label: self.label.clone(),
            tagging: self.tagging.clone(),
        }
    }
}

/// A condition shared by both ends of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shared {
    pub label: Label,
    pub capacity: Capacity,
    pub at_u: Port,
    pub at_v: Port,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgEdge {
    pub u: usize,
    pub v: usize,
    pub shared: Vec<Shared>,
}

impl NgEdge {
    /// Tagging rendered with `from` as the front node.
    pub fn tagging_from(&self, from: usize) -> EdgeTagging {
        let from_u = from == self.u;
        debug_assert!(from_u || from == self.v);
        EdgeTagging::from_unsorted(
            self.shared
                .iter()
                .map(|s| {
                    let (f, r) = if from_u { (s.at_u, s.at_v) } else { (s.at_v, s.at_u) };
                    Triple::new(f, s.label.clone(), s.capacity, r)
                })
                .collect(),
        )
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// Builds an edge from a tagging rendered at `u`.
    pub fn from_tagging(u: usize, v: usize, tagging: &EdgeTagging) -> Self {
        NgEdge {
            u,
            v,
            shared: tagging
                .0
                .iter()
                .map(|t| Shared {
                    label: t.label.clone(),
                    capacity: t.capacity,
                    at_u: t.front_port(),
                    at_v: t.rear_port(),
                })
                .collect(),
        }
    }
}

/// Net graph `(V, D, W)`: tagged event nodes, shared-condition edges and the
/// condition label universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetGraph {
    pub id: String,
    pub nodes: Vec<NgNode>,
    pub edges: Vec<NgEdge>,
    pub universe: BTreeSet<Label>,
}

impl NetGraph {
    pub fn node_rendering(&self, i: usize) -> NodeRendering {
        self.nodes[i].rendering()
    }

    /// Per node, `(neighbor, edge index)` pairs sorted by neighbor.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, k));
            adj[e.v].push((e.u, k));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Connected components as sorted node lists, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.nodes.len()];
        let mut out = Vec::new();
        for s in 0..self.nodes.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                for &(w, _) in &adj[members[i]] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Induced sub-net-graph on `keep` (positions, any order). Nodes keep
    /// their taggings, so the result describes a complete subnet.
    pub fn induced(&self, keep: &[usize]) -> NetGraph {
        let mut pos = vec![usize::MAX; self.nodes.len()];
        for (i, &k) in keep.iter().enumerate() {
            pos[k] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| pos[e.u] != usize::MAX && pos[e.v] != usize::MAX)
            .map(|e| NgEdge {
                u: pos[e.u],
                v: pos[e.v],
                shared: e.shared.clone(),
            })
            .collect();
        let nodes: Vec<NgNode> = keep.iter().map(|&k| self.nodes[k].clone()).collect();
        let universe = nodes
            .iter()
            .flat_map(|n| n.tagging.iter().map(|s| s.label.clone()))
            .collect();
        NetGraph {
            id: self.id.clone(),
            nodes,
            edges,
            universe,
        }
    }
}
