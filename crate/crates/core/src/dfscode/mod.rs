//! DFS codes: traversal records of net graphs with a total order, minimal
//! (canonical) codes, exhaustive enumeration and reconstruction.

pub mod canon;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::netgraph::parse::{split_top, unwrap_parens};
use crate::netgraph::{
    parse_edge_tagging, parse_node_rendering, EdgeTagging, NetGraph, NgEdge, NgNode, NodeRendering,
    ParseError,
};

pub use canon::{Alphabet, CanonLimits, RCode, RUnit, RankedGraph};

/// Node bound for [`enumerate_dfs_codes`].
pub const ENUMERATE_NODE_LIMIT: usize = 8;
/// Traversal bound for [`enumerate_dfs_codes`].
pub const ENUMERATE_CODE_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfsError {
    #[error("net graph is disconnected")]
    Disconnected,
    #[error("net graph has no edges")]
    NoEdges,
    #[error("too many {what}: {found} exceeds limit {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        found: usize,
        limit: usize,
    },
    #[error("malformed code: {0}")]
    MalformedCode(String),
}

impl From<ParseError> for DfsError {
    fn from(e: ParseError) -> Self {
        DfsError::MalformedCode(e.to_string())
    }
}

/// One traversal step `(i, j, front, edge, rear, graph id)`. Comparison and
/// equality ignore the graph id.
#[derive(Debug, Clone)]
pub struct DfsCodeUnit {
    pub front_order: u32,
    pub rear_order: u32,
    pub front: NodeRendering,
    pub edge: EdgeTagging,
    pub rear: NodeRendering,
    pub graph_id: Option<String>,
}

impl DfsCodeUnit {
    fn key(&self) -> (u32, &NodeRendering, &EdgeTagging, &NodeRendering, u32) {
        (self.front_order, &self.front, &self.edge, &self.rear, self.rear_order)
    }

    /// Segments 3 to 5, direction-canonicalized.
    pub fn identification(&self) -> EdgeIdentification {
        EdgeIdentification::new(&self.front, &self.edge, &self.rear)
    }

    pub fn parse(s: &str) -> Result<Self, DfsError> {
        let parts = split_top(unwrap_parens(s)?)?;
        if parts.len() != 5 && parts.len() != 6 {
            return Err(DfsError::MalformedCode(format!("{s:?}: expected 5 or 6 segments")));
        }
        let order = |p: &str| {
            p.parse::<u32>()
                .map_err(|_| DfsError::MalformedCode(format!("bad order {p:?}")))
        };
        Ok(DfsCodeUnit {
            front_order: order(parts[0])?,
            rear_order: order(parts[1])?,
            front: parse_node_rendering(parts[2])?,
            edge: parse_edge_tagging(parts[3])?,
            rear: parse_node_rendering(parts[4])?,
            graph_id: parts.get(5).map(|g| g.to_string()),
        })
    }
}

impl PartialEq for DfsCodeUnit {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for DfsCodeUnit {}

impl Ord for DfsCodeUnit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for DfsCodeUnit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DfsCodeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{}",
            self.front_order, self.rear_order, self.front, self.edge, self.rear
        )?;
        if let Some(g) = &self.graph_id {
            write!(f, ",{g}")?;
        }
        f.write_str(")")
    }
}

/// Ordered sequence of units; compared unit by unit, a proper prefix first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DfsCode(pub Vec<DfsCodeUnit>);

impl DfsCode {
    pub fn unit_strings(&self) -> Vec<String> {
        self.0.iter().map(|u| u.to_string()).collect()
    }

    pub fn parse_units<S: AsRef<str>>(units: &[S]) -> Result<Self, DfsError> {
        units.iter().map(|u| DfsCodeUnit::parse(u.as_ref())).collect::<Result<_, _>>().map(DfsCode)
    }

    pub fn without_graph_id(mut self) -> Self {
        for u in &mut self.0 {
            u.graph_id = None;
        }
        self
    }

    pub fn with_graph_id(mut self, gid: &str) -> Self {
        for u in &mut self.0 {
            u.graph_id = Some(gid.to_string());
        }
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for DfsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in &self.0 {
            write!(f, "{u}")?;
        }
        Ok(())
    }
}

/// `(front, edge, rear)` of the smaller rendering direction of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIdentification {
    pub front: NodeRendering,
    pub edge: EdgeTagging,
    pub rear: NodeRendering,
}

impl EdgeIdentification {
    pub fn new(a: &NodeRendering, e: &EdgeTagging, b: &NodeRendering) -> Self {
        let fwd = (a, e);
        let flipped = e.flipped();
        if (b, &flipped, a) < (fwd.0, fwd.1, b) {
            EdgeIdentification {
                front: b.clone(),
                edge: flipped,
                rear: a.clone(),
            }
        } else {
            EdgeIdentification {
                front: a.clone(),
                edge: e.clone(),
                rear: b.clone(),
            }
        }
    }
}

impl fmt::Display for EdgeIdentification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.front, self.edge, self.rear)
    }
}

/// Identification of edge `k` of `ng`.
pub fn edge_identification(ng: &NetGraph, k: usize) -> EdgeIdentification {
    let e = &ng.edges[k];
    EdgeIdentification::new(&ng.node_rendering(e.u), &e.tagging_from(e.u), &ng.node_rendering(e.v))
}

pub(crate) fn render_code(code: &RCode, alpha: &Alphabet, gid: Option<&str>) -> DfsCode {
    DfsCode(
        code.units
            .iter()
            .map(|u| DfsCodeUnit {
                front_order: u.i,
                rear_order: u.j,
                front: alpha.node(u.a).clone(),
                edge: alpha.edge(u.e).clone(),
                rear: alpha.node(u.b).clone(),
                graph_id: gid.map(str::to_string),
            })
            .collect(),
    )
}

/// Minimal DFS code of a connected net graph with at least one edge; units
/// carry the graph id.
pub fn minimal_dfs_code(ng: &NetGraph) -> Result<DfsCode, DfsError> {
    minimal_dfs_code_with(ng, CanonLimits::default())
}

pub fn minimal_dfs_code_with(ng: &NetGraph, limits: CanonLimits) -> Result<DfsCode, DfsError> {
    if ng.edges.is_empty() {
        return Err(if ng.nodes.len() > 1 { DfsError::Disconnected } else { DfsError::NoEdges });
    }
    let alpha = Alphabet::build([ng]);
    let g = RankedGraph::new(ng, &alpha);
    let (code, _) = canon::min_code(&g, limits)?;
    Ok(render_code(&code, &alpha, Some(&ng.id)))
}

/// Canonical form of one connected component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentCode {
    Node(NodeRendering),
    Code(DfsCode),
}

/// Canonical form of any net graph: one entry per component, sorted.
pub fn canonical_components(ng: &NetGraph) -> Result<Vec<ComponentCode>, DfsError> {
    let mut out = Vec::new();
    for comp in ng.components() {
        if comp.len() == 1 {
            out.push(ComponentCode::Node(ng.node_rendering(comp[0])));
        } else {
            let sub = ng.induced(&comp);
            out.push(ComponentCode::Code(minimal_dfs_code(&sub)?.without_graph_id()));
        }
    }
    out.sort();
    Ok(out)
}

/// All codes from every admissible traversal (backward edges before forward
/// ones at each step), from every start node.
pub fn enumerate_dfs_codes(ng: &NetGraph) -> Result<BTreeSet<DfsCode>, DfsError> {
    if ng.nodes.len() > ENUMERATE_NODE_LIMIT {
        return Err(DfsError::SizeGuardExceeded {
            what: "nodes",
            found: ng.nodes.len(),
            limit: ENUMERATE_NODE_LIMIT,
        });
    }
    if ng.edges.is_empty() {
        return Err(if ng.nodes.len() > 1 { DfsError::Disconnected } else { DfsError::NoEdges });
    }
    let alpha = Alphabet::build([ng]);
    let g = RankedGraph::new(ng, &alpha);
    Ok(canon::all_codes(&g, ENUMERATE_CODE_LIMIT)?
        .iter()
        .map(|c| render_code(c, &alpha, Some(&ng.id)))
        .collect())
}

/// Rebuilds the net graph a code describes. Node `k` has id `n{k}` and is the
/// node of order `k`.
pub fn code_to_netgraph(code: &DfsCode) -> Result<NetGraph, DfsError> {
    let bad = |m: String| Err(DfsError::MalformedCode(m));
    if code.0.is_empty() {
        return bad("empty code".into());
    }
    let mut renders: Vec<NodeRendering> = Vec::new();
    let mut edges: Vec<NgEdge> = Vec::new();
    let mut pairs = BTreeSet::new();
    for (n, u) in code.0.iter().enumerate() {
        let (i, j) = (u.front_order as usize, u.rear_order as usize);
        if n == 0 && (i, j) != (0, 1) {
            return bad("first unit must be (0,1)".into());
        }
        if n == 0 {
            renders.push(u.front.clone());
        }
        if i >= renders.len() {
            return bad(format!("unit {n}: front order {i} not yet visited"));
        }
        if renders[i] != u.front {
            return bad(format!("unit {n}: node {i} rendered inconsistently"));
        }
        if j == renders.len() {
            renders.push(u.rear.clone());
        } else if j > renders.len() || j == i {
            return bad(format!("unit {n}: bad rear order {j}"));
        } else if renders[j] != u.rear {
            return bad(format!("unit {n}: node {j} rendered inconsistently"));
        }
        if !pairs.insert((i.min(j), i.max(j))) {
            return bad(format!("unit {n}: edge {i}-{j} repeated"));
        }
        edges.push(NgEdge::from_tagging(i, j, &u.edge));
    }
    let nodes: Vec<NgNode> = renders
        .into_iter()
        .enumerate()
        .map(|(k, r)| NgNode {
            id: format!("n{k}"),
            label: r.label,
            tagging: r.tagging,
        })
        .collect();
    let universe = nodes
        .iter()
        .flat_map(|n| n.tagging.iter().map(|s| s.label.clone()))
        .collect();
    let gid = code.0[0].graph_id.clone().unwrap_or_default();
    Ok(NetGraph {
        id: gid,
        nodes,
        edges,
        universe,
    })
}
