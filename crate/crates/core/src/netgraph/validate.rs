use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::label::Label;
use crate::petri::Capacity;

use super::{NetGraph, Port};

/// A broken net-graph rule, naming the offending node ids / label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyEdgeTagging { u: String, v: String },
    SelfEdge { node: String },
    BadEndpoint { edge: usize },
    DuplicateEdge { u: String, v: String },
    RepeatedEdgeLabel { u: String, v: String, label: String },
    UnsortedNodeTagging { node: String },
    /// Edges of one condition disagree about its sign at `node`.
    SignConflict { label: String, node: String },
    /// An edge claims a shared condition that `node`'s tagging lacks.
    MissingFromNodeTagging { label: String, node: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyEdgeTagging { u, v } => write!(f, "EmptyEdgeTagging({u},{v})"),
            Violation::SelfEdge { node } => write!(f, "SelfEdge({node})"),
            Violation::BadEndpoint { edge } => write!(f, "BadEndpoint(edge {edge})"),
            Violation::DuplicateEdge { u, v } => write!(f, "DuplicateEdge({u},{v})"),
            Violation::RepeatedEdgeLabel { u, v, label } => {
                write!(f, "RepeatedEdgeLabel({u},{v},{label})")
            }
            Violation::UnsortedNodeTagging { node } => write!(f, "UnsortedNodeTagging({node})"),
            Violation::SignConflict { label, node } => write!(f, "SignConflict({label},{node})"),
            Violation::MissingFromNodeTagging { label, node } => {
                write!(f, "MissingFromNodeTagging({label},{node})")
            }
        }
    }
}

pub(crate) type CondKey = (Label, Capacity);

/// One connected group of edges carrying the same condition key.
pub(crate) struct Complex {
    pub edges: Vec<usize>,
    /// Port at each member node (first seen wins when edges disagree).
    pub ports: Vec<(usize, Port)>,
    pub conflicts: Vec<usize>,
}

fn well_formed_edge(ng: &NetGraph, k: usize) -> bool {
    let e = &ng.edges[k];
    e.u < ng.nodes.len() && e.v < ng.nodes.len() && e.u != e.v
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Complexes for every key, grouped by union-find over nodes.
pub(crate) fn complexes_by_key(ng: &NetGraph) -> BTreeMap<CondKey, Vec<Complex>> {
    let mut by_key: BTreeMap<CondKey, Vec<usize>> = BTreeMap::new();
    for (k, e) in ng.edges.iter().enumerate() {
        if !well_formed_edge(ng, k) {
            continue;
        }
        for s in &e.shared {
            by_key.entry((s.label.clone(), s.capacity)).or_default().push(k);
        }
    }
    let mut parent: Vec<usize> = (0..ng.nodes.len()).collect();
    let mut out = BTreeMap::new();
    for (key, mut edges) in by_key {
        edges.dedup();
        let mut touched = Vec::new();
        for &k in &edges {
            let e = &ng.edges[k];
            touched.extend([e.u, e.v]);
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
            }
        }
        let mut groups: Vec<Complex> = Vec::new();
        let mut root_group: HashMap<usize, usize> = HashMap::new();
        let mut port_at: HashMap<usize, Port> = HashMap::new();
        for &k in &edges {
            let e = &ng.edges[k];
            let r = find(&mut parent, e.u);
            let g = *root_group.entry(r).or_insert_with(|| {
                groups.push(Complex {
                    edges: Vec::new(),
                    ports: Vec::new(),
                    conflicts: Vec::new(),
                });
                groups.len() - 1
            });
            groups[g].edges.push(k);
            for s in e.shared.iter().filter(|s| s.label == key.0 && s.capacity == key.1) {
                for (node, port) in [(e.u, s.at_u), (e.v, s.at_v)] {
                    match port_at.get(&node) {
                        None => {
                            port_at.insert(node, port);
                            groups[g].ports.push((node, port));
                        }
                        Some(p) if *p != port => groups[g].conflicts.push(node),
                        Some(_) => {}
                    }
                }
            }
        }
        for g in &mut groups {
            g.ports.sort();
            g.conflicts.sort();
            g.conflicts.dedup();
        }
        for n in touched {
            parent[n] = n;
        }
        out.insert(key, groups);
    }
    out
}

/// Checks the net-graph rules; an empty list means the graph is valid and
/// decodes to a net.
pub fn validate_netgraph(ng: &NetGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let id = |i: usize| ng.nodes[i].id.clone();
    let mut pairs = HashSet::new();
    for (k, e) in ng.edges.iter().enumerate() {
        if e.u >= ng.nodes.len() || e.v >= ng.nodes.len() {
            out.push(Violation::BadEndpoint { edge: k });
            continue;
        }
        if e.u == e.v {
            out.push(Violation::SelfEdge { node: id(e.u) });
            continue;
        }
        if !pairs.insert((e.u.min(e.v), e.u.max(e.v))) {
            out.push(Violation::DuplicateEdge { u: id(e.u), v: id(e.v) });
        }
        if e.shared.is_empty() {
            out.push(Violation::EmptyEdgeTagging { u: id(e.u), v: id(e.v) });
        }
        let mut keys = HashSet::new();
        for s in &e.shared {
            if !keys.insert((&s.label, s.capacity)) {
                out.push(Violation::RepeatedEdgeLabel {
                    u: id(e.u),
                    v: id(e.v),
                    label: s.label.to_string(),
                });
            }
        }
    }
    for n in &ng.nodes {
        if n.tagging.windows(2).any(|w| w[0] > w[1]) {
            out.push(Violation::UnsortedNodeTagging { node: n.id.clone() });
        }
    }
    for (key, groups) in complexes_by_key(ng) {
        for g in groups {
            for &node in &g.conflicts {
                out.push(Violation::SignConflict {
                    label: key.0.to_string(),
                    node: id(node),
                });
            }
            for &(node, port) in &g.ports {
                let present = ng.nodes[node].tagging.iter().any(|s| {
                    s.label == key.0 && s.capacity == key.1 && s.port() == port
                });
                if !present {
                    out.push(Violation::MissingFromNodeTagging {
                        label: key.0.to_string(),
                        node: id(node),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::netgraph::{net_to_netgraph, NgEdge, Port, Shared, Sign};

    fn l(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn figure_graph_is_valid() {
        let ng = net_to_netgraph(&fixtures::three_event_net()).unwrap();
        assert_eq!(validate_netgraph(&ng), vec![]);
    }

    #[test]
    fn empty_edge_flagged() {
        let mut ng = net_to_netgraph(&fixtures::three_event_net()).unwrap();
        ng.edges[0].shared.clear();
        assert!(matches!(
            validate_netgraph(&ng).as_slice(),
            [Violation::EmptyEdgeTagging { .. }]
        ));
    }

    #[test]
    fn sign_conflict_flagged() {
        let mut ng = net_to_netgraph(&fixtures::three_event_net()).unwrap();
        // Flip c9 at v1 on the v1-v2 edge only.
        let e = ng.edges.iter_mut().find(|e| (e.u, e.v) == (0, 1)).unwrap();
        for s in &mut e.shared {
            if s.label.as_str() == "c9" {
                s.at_u = Port::new(Sign::Plus);
            }
        }
        let v = validate_netgraph(&ng);
        assert!(v.contains(&Violation::SignConflict {
            label: "c9".into(),
            node: "v1".into()
        }));
    }

    #[test]
    fn stray_edge_label_flagged() {
        let mut ng = net_to_netgraph(&fixtures::three_event_net()).unwrap();
        ng.edges.push(NgEdge { u: 0, v: 0, shared: vec![] });
        ng.edges[0].shared.push(Shared {
            label: l("zz"),
            capacity: Capacity::Infinite,
            at_u: Port::new(Sign::Minus),
            at_v: Port::new(Sign::Plus),
        });
        let v = validate_netgraph(&ng);
        assert!(v.contains(&Violation::SelfEdge { node: "v1".into() }));
        assert!(v.iter().any(|x| matches!(x, Violation::MissingFromNodeTagging { .. })));
    }
}
