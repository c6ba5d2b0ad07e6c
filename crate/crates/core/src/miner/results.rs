use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dfscode::code_to_netgraph;
use crate::netgraph::{netgraph_to_net, NetGraph, NgNode};
use crate::petri::Net;

use super::{MineError, MiningResult, Pattern, PatternCode};

/// A mined pattern turned back into a net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subnet {
    pub net: Net,
    pub edges: usize,
    pub support: usize,
    pub supporters: Vec<String>,
}

/// Rebuilds each pattern as a complete subnet. Net ids are `p{k}` in result
/// order.
pub fn patterns_to_subnets(result: &MiningResult) -> Result<Vec<Subnet>, MineError> {
    result
        .patterns()
        .enumerate()
        .map(|(k, p)| {
            Ok(Subnet {
                net: pattern_to_net(p, &format!("p{k}"))?,
                edges: p.code.edges(),
                support: p.support,
                supporters: p.supporters.clone(),
            })
        })
        .collect()
}

/// The complete subnet described by one pattern.
pub fn pattern_to_net(p: &Pattern, id: &str) -> Result<Net, MineError> {
    let mut ng = match &p.code {
        PatternCode::Node(r) => NetGraph {
            id: String::new(),
            nodes: vec![NgNode {
                id: "n0".into(),
                label: r.label.clone(),
                tagging: r.tagging.clone(),
            }],
            edges: Vec::new(),
            universe: r.tagging.iter().map(|s| s.label.clone()).collect::<BTreeSet<_>>(),
        },
        PatternCode::Code(c) => code_to_netgraph(c)?,
    };
    ng.id = id.to_string();
    Ok(netgraph_to_net(&ng)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub edges: usize,
    pub code: Vec<String>,
    pub support: usize,
    pub supporters: Vec<String>,
    pub net: Net,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultsJson {
    pub minsup: usize,
    pub inputs: usize,
    /// Pattern count per edge count.
    pub buckets: Vec<usize>,
    pub patterns: Vec<PatternJson>,
}

pub fn results_json(result: &MiningResult) -> Result<ResultsJson, MineError> {
    let subnets = patterns_to_subnets(result)?;
    let patterns = result
        .patterns()
        .zip(subnets)
        .map(|(p, s)| PatternJson {
            edges: s.edges,
            code: p.code.unit_strings(),
            support: p.support,
            supporters: s.supporters,
            net: s.net,
        })
        .collect();
    Ok(ResultsJson {
        minsup: result.minsup,
        inputs: result.inputs,
        buckets: result.fd.iter().map(Vec::len).collect(),
        patterns,
    })
}
