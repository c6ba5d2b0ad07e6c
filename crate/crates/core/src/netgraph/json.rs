use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::label::Label;

use super::parse::{err, parse_edge_tagging, parse_tagging};
use super::{render_tagging, NetGraph, NetGraphError, NgEdge, NgNode};

/// Interchange form of a [`NetGraph`]; taggings are stored as renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetGraphJson {
    pub id: String,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: String,
    pub label: Label,
    pub tagging: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    pub tagging_from_u: String,
}

impl From<&NetGraph> for NetGraphJson {
    fn from(ng: &NetGraph) -> Self {
        NetGraphJson {
            id: ng.id.clone(),
            nodes: ng
                .nodes
                .iter()
                .map(|n| NodeJson {
                    id: n.id.clone(),
                    label: n.label.clone(),
                    tagging: render_tagging(&n.tagging),
                })
                .collect(),
            edges: ng
                .edges
                .iter()
                .map(|e| EdgeJson {
                    u: ng.nodes[e.u].id.clone(),
                    v: ng.nodes[e.v].id.clone(),
                    tagging_from_u: e.tagging_from(e.u).to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&NetGraphJson> for NetGraph {
    type Error = NetGraphError;

    fn try_from(j: &NetGraphJson) -> Result<Self, NetGraphError> {
        let mut pos = HashMap::new();
        let mut nodes = Vec::with_capacity(j.nodes.len());
        for (i, n) in j.nodes.iter().enumerate() {
            if pos.insert(n.id.as_str(), i).is_some() {
                return Err(err::<()>(&n.id, "duplicate node id").unwrap_err().into());
            }
            let mut tagging = parse_tagging(&n.tagging)?;
            tagging.sort();
            nodes.push(NgNode {
                id: n.id.clone(),
                label: n.label.clone(),
                tagging,
            });
        }
        let mut edges = Vec::with_capacity(j.edges.len());
        for e in &j.edges {
            let u = *pos
                .get(e.u.as_str())
                .ok_or_else(|| err::<()>(&e.u, "unknown node").unwrap_err())?;
            let v = *pos
                .get(e.v.as_str())
                .ok_or_else(|| err::<()>(&e.v, "unknown node").unwrap_err())?;
            edges.push(NgEdge::from_tagging(u, v, &parse_edge_tagging(&e.tagging_from_u)?));
        }
        let universe: BTreeSet<Label> = nodes
            .iter()
            .flat_map(|n| n.tagging.iter().map(|s| s.label.clone()))
            .collect();
        Ok(NetGraph {
            id: j.id.clone(),
            nodes,
            edges,
            universe,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::netgraph::net_to_netgraph;

    #[test]
    fn json_round_trip() {
        let ng = net_to_netgraph(&fixtures::three_event_net()).unwrap();
        let j = NetGraphJson::from(&ng);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"tagging_from_u\":\"((-,c9,-),(+,c6,+))\""));
        let back = NetGraph::try_from(&serde_json::from_str::<NetGraphJson>(&text).unwrap()).unwrap();
        assert_eq!(back.nodes, ng.nodes);
        assert_eq!(back.edges.len(), ng.edges.len());
        for (a, b) in back.edges.iter().zip(&ng.edges) {
            assert_eq!(a.tagging_from(a.u), b.tagging_from(b.u));
        }
    }
}
