//! Place/transition and inhibitor-arc nets.
//!
//! The plain transform already carries capacities, weights and inhibitor
//! signs; these entry points add the stricter input checks of each net kind
//! and the inverse that restores explicit annotations.

use rand::Rng;

use crate::netgraph::{net_to_netgraph, netgraph_to_net, NetGraph, NetGraphError};
use crate::petri::{Capacity, Net, NetError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error("{kind} {id:?} has no explicit annotation")]
    MissingAnnotation { kind: &'static str, id: String },
    #[error("inhibitor arc {from:?} -> {to:?} must run from a condition to an event")]
    InvalidInhibitor { from: String, to: String },
    #[error(transparent)]
    NetGraph(#[from] NetGraphError),
}

fn lift(e: NetGraphError) -> ExtError {
    match e {
        NetGraphError::Net(NetError::InhibitorOutput { from, to }) => ExtError::InvalidInhibitor { from, to },
        e => ExtError::NetGraph(e),
    }
}

/// Net graph of a place/transition net. Every arc needs an explicit weight
/// and every condition an explicit capacity (`inf` allowed).
pub fn pt_net_to_netgraph(net: &Net) -> Result<NetGraph, ExtError> {
    if let Some(a) = net.arcs.iter().find(|a| a.weight.is_none()) {
        return Err(ExtError::MissingAnnotation {
            kind: "arc",
            id: format!("{}->{}", a.from, a.to),
        });
    }
    if let Some(c) = net.conditions.iter().find(|c| !net.capacities.contains_key(&c.id)) {
        return Err(ExtError::MissingAnnotation {
            kind: "condition",
            id: c.id.clone(),
        });
    }
    net_to_netgraph(net).map_err(lift)
}

/// Inverse of [`pt_net_to_netgraph`]: weights and capacities are written out
/// for every arc and condition, defaults included.
pub fn pt_netgraph_to_net(ng: &NetGraph) -> Result<Net, ExtError> {
    Ok(with_explicit_annotations(&netgraph_to_net(ng)?))
}

/// Net graph of a net with inhibitor arcs; they render with `--`.
pub fn inhibitor_net_to_netgraph(net: &Net) -> Result<NetGraph, ExtError> {
    net_to_netgraph(net).map_err(lift)
}

/// Copy of `net` with weight 1 and capacity `inf` written wherever the
/// annotation was left to its default.
pub fn with_explicit_annotations(net: &Net) -> Net {
    let mut out = net.clone();
    for a in &mut out.arcs {
        a.weight.get_or_insert(1);
    }
    for c in &net.conditions {
        out.capacities.entry(c.id.clone()).or_insert(Capacity::Infinite);
    }
    out
}

/// Copy of `net` with random explicit annotations: weights in `1..=5`,
/// capacities in `1..=20` or `inf` (one in five).
pub fn annotate_random<R: Rng>(net: &Net, rng: &mut R) -> Net {
    let mut out = net.clone();
    for a in &mut out.arcs {
        a.weight = Some(rng.gen_range(1..=5));
    }
    out.capacities.clear();
    for c in &net.conditions {
        let k = if rng.gen_bool(0.2) {
            Capacity::Infinite
        } else {
            Capacity::Finite(rng.gen_range(1..=20))
        };
        out.capacities.insert(c.id.clone(), k);
    }
    out
}

/// Copy of `net` where each condition-to-event arc becomes an inhibitor arc
/// with probability `p`.
pub fn mark_inhibitors<R: Rng>(net: &Net, p: f64, rng: &mut R) -> Net {
    let conds: std::collections::HashSet<&str> = net.conditions.iter().map(|c| c.id.as_str()).collect();
    let mut out = net.clone();
    for a in &mut out.arcs {
        if conds.contains(a.from.as_str()) && rng.gen_bool(p) {
            a.inhibitor = true;
        }
    }
    out
}
