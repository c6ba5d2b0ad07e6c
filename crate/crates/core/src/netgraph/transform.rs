use std::collections::{BTreeMap, HashMap, HashSet};

use crate::label::Label;
use crate::petri::{Arc, Capacity, ConditionNode, EventNode, Net, NetIndex};

use super::validate::{complexes_by_key, validate_netgraph};
use super::{NetGraph, NetGraphError, NgEdge, NgNode, Port, Shared, Sign, SignedCondition};

/// Encodes a pure net with at least one event as a net graph. Node `i` is
/// event `i` of the net and keeps its id.
pub fn net_to_netgraph(net: &Net) -> Result<NetGraph, NetGraphError> {
    let ix = NetIndex::new(net)?;
    if net.events.is_empty() {
        return Err(NetGraphError::NoEvents(net.id.clone()));
    }
    if !ix.is_pure() {
        return Err(NetGraphError::NotPure(net.id.clone()));
    }
    let port_of = |arc: &Arc| {
        let sign = if arc.inhibitor { Sign::Inhibitor } else { Sign::Minus };
        Port::weighted(sign, arc.effective_weight())
    };

    let mut nodes: Vec<NgNode> = net
        .events
        .iter()
        .map(|e| NgNode {
            id: e.id.clone(),
            label: e.label.clone(),
            tagging: Vec::new(),
        })
        .collect();
    // Per condition: (event position, port at that event).
    let mut attach: Vec<Vec<(usize, Port)>> = vec![Vec::new(); net.conditions.len()];
    for e in 0..net.events.len() {
        for &a in &ix.event_in[e] {
            attach[ix.arc_condition(a)].push((e, port_of(&net.arcs[a])));
        }
        for &a in &ix.event_out[e] {
            let p = Port::weighted(Sign::Plus, net.arcs[a].effective_weight());
            attach[ix.arc_condition(a)].push((e, p));
        }
    }

    let mut edges: BTreeMap<(usize, usize), Vec<Shared>> = BTreeMap::new();
    let mut multi_keys: Vec<HashSet<(&Label, Capacity)>> = vec![HashSet::new(); net.events.len()];
    for (c, att) in attach.iter_mut().enumerate() {
        let cond = &net.conditions[c];
        let cap = net.capacity_of(&cond.id);
        if att.is_empty() {
            return Err(NetGraphError::IsolatedCondition(cond.id.clone()));
        }
        att.sort_unstable();
        for &(e, p) in att.iter() {
            nodes[e].tagging.push(SignedCondition {
                sign: p.sign,
                label: cond.label.clone(),
                capacity: cap,
                weight: p.weight,
            });
        }
        if att.len() < 2 {
            continue;
        }
        for &(e, _) in att.iter() {
            if !multi_keys[e].insert((&cond.label, cap)) {
                return Err(NetGraphError::AmbiguousLabel {
                    event: net.events[e].id.clone(),
                    label: cond.label.to_string(),
                });
            }
        }
        for (i, &(e1, p1)) in att.iter().enumerate() {
            for &(e2, p2) in &att[i + 1..] {
                edges.entry((e1, e2)).or_default().push(Shared {
                    label: cond.label.clone(),
                    capacity: cap,
                    at_u: p1,
                    at_v: p2,
                });
            }
        }
    }
    for n in &mut nodes {
        n.tagging.sort();
    }
    let edges = edges
        .into_iter()
        .map(|((u, v), mut shared)| {
            shared.sort();
            NgEdge { u, v, shared }
        })
        .collect();
    Ok(NetGraph {
        id: net.id.clone(),
        nodes,
        edges,
        universe: net.conditions.iter().map(|c| c.label.clone()).collect(),
    })
}

/// Partitions the edges carrying `label` into maximal connected groups; each
/// group stands for one shared condition node. Groups are sorted edge index
/// lists, ordered by their first edge.
pub fn c_complexes(ng: &NetGraph, label: &Label) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = complexes_by_key(ng)
        .into_iter()
        .filter(|(k, _)| &k.0 == label)
        .flat_map(|(_, cs)| cs.into_iter().map(|c| c.edges))
        .collect();
    out.sort();
    out
}

/// Decodes a net graph back into a net. Conditions are numbered `c1, c2, ...`
/// in order of first appearance, skipping ids used by events.
pub fn netgraph_to_net(ng: &NetGraph) -> Result<Net, NetGraphError> {
    let violations = validate_netgraph(ng);
    if !violations.is_empty() {
        return Err(NetGraphError::InvalidTagging(violations));
    }
    // For every node and key, the complex (if any) that covers it, with its port.
    let mut covered: Vec<HashMap<(Label, Capacity), (usize, Port)>> =
        vec![HashMap::new(); ng.nodes.len()];
    let mut n_complex = 0;
    for (key, cs) in complexes_by_key(ng) {
        for c in cs {
            for (node, port) in c.ports {
                covered[node].insert(key.clone(), (n_complex, port));
            }
            n_complex += 1;
        }
    }

    let event_ids: HashSet<&str> = ng.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut counter = 0usize;
    let mut fresh_id = || loop {
        counter += 1;
        let id = format!("c{counter}");
        if !event_ids.contains(id.as_str()) {
            return id;
        }
    };

    let mut net = Net::new(ng.id.clone());
    let mut complex_cond: Vec<Option<String>> = vec![None; n_complex];
    for (i, node) in ng.nodes.iter().enumerate() {
        net.events.push(EventNode {
            id: node.id.clone(),
            label: node.label.clone(),
        });
        let mut used: HashSet<(Label, Capacity)> = HashSet::new();
        for sc in &node.tagging {
            let key = (sc.label.clone(), sc.capacity);
            let hit = covered[i]
                .get(&key)
                .filter(|(_, p)| *p == sc.port() && !used.contains(&key))
                .map(|&(c, _)| c);
            let cond_id = match hit {
                Some(c) => {
                    used.insert(key);
                    match &complex_cond[c] {
                        Some(id) => id.clone(),
                        None => {
                            let id = fresh_id();
                            push_condition(&mut net, &id, sc);
                            complex_cond[c] = Some(id.clone());
                            id
                        }
                    }
                }
                None => {
                    let id = fresh_id();
                    push_condition(&mut net, &id, sc);
                    id
                }
            };
            let (from, to) = if sc.sign.is_input() {
                (cond_id, node.id.clone())
            } else {
                (node.id.clone(), cond_id)
            };
            net.arcs.push(Arc {
                from,
                to,
                weight: (sc.weight != 1).then_some(sc.weight),
                inhibitor: sc.sign == Sign::Inhibitor,
            });
        }
    }
    Ok(net)
}

fn push_condition(net: &mut Net, id: &str, sc: &SignedCondition) {
    net.conditions.push(ConditionNode {
        id: id.to_string(),
        label: sc.label.clone(),
    });
    if let Capacity::Finite(_) = sc.capacity {
        net.capacities.insert(id.to_string(), sc.capacity);
    }
}
