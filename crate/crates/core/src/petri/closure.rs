use std::collections::{BTreeMap, HashSet};

use super::net::{Net, NetError, NetIndex, NodeRef};

/// The complete subnet spanned by `event_ids`: those events, every condition
/// adjacent to any of them, and every arc between the two sets. Node and arc
/// order follows the source net.
pub fn complete_closure<S: AsRef<str>>(net: &Net, event_ids: &[S]) -> Result<Net, NetError> {
    let ix = NetIndex::new(net)?;
    let mut chosen = vec![false; net.events.len()];
    for id in event_ids {
        match ix.lookup(id.as_ref())? {
            NodeRef::Event(e) => chosen[e] = true,
            NodeRef::Condition(_) => return Err(NetError::UnknownNode(id.as_ref().to_string())),
        }
    }
    Ok(closure_by_position(&ix, &chosen))
}

pub(crate) fn closure_by_position(ix: &NetIndex<'_>, chosen: &[bool]) -> Net {
    let net = ix.net;
    let mut keep_cond = vec![false; net.conditions.len()];
    let mut keep_arc = vec![false; net.arcs.len()];
    for (e, _) in chosen.iter().enumerate().filter(|(_, &c)| c) {
        for &a in ix.event_in[e].iter().chain(&ix.event_out[e]) {
            keep_arc[a] = true;
            keep_cond[ix.arc_condition(a)] = true;
        }
    }
    let conditions: Vec<_> = net
        .conditions
        .iter()
        .zip(&keep_cond)
        .filter(|(_, &k)| k)
        .map(|(c, _)| c.clone())
        .collect();
    let kept_ids: HashSet<&str> = conditions.iter().map(|c| c.id.as_str()).collect();
    let capacities: BTreeMap<_, _> = net
        .capacities
        .iter()
        .filter(|(id, _)| kept_ids.contains(id.as_str()))
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    Net {
        id: net.id.clone(),
        conditions,
        events: net
            .events
            .iter()
            .zip(chosen)
            .filter(|(_, &c)| c)
            .map(|(e, _)| e.clone())
            .collect(),
        arcs: net
            .arcs
            .iter()
            .zip(&keep_arc)
            .filter(|(_, &k)| k)
            .map(|(a, _)| a.clone())
            .collect(),
        capacities,
    }
}

/// Checks, by node id, that `sub` is the complete subnet of `net` spanned by
/// its own events: same labels and annotations, every condition adjacent to a
/// chosen event present, and exactly the arcs of the chosen events.
pub fn is_complete_subnet(net: &Net, sub: &Net) -> bool {
    let Ok(ix) = NetIndex::new(net) else {
        return false;
    };
    let mut chosen = vec![false; net.events.len()];
    for ev in &sub.events {
        match ix.lookup(&ev.id) {
            Ok(NodeRef::Event(e)) if net.events[e].label == ev.label => chosen[e] = true,
            _ => return false,
        }
    }
    let expect = closure_by_position(&ix, &chosen);
    same_by_id(&expect, sub)
}

fn same_by_id(a: &Net, b: &Net) -> bool {
    let set = |n: &Net| -> HashSet<String> {
        n.conditions
            .iter()
            .map(|c| format!("c {} {} {}", c.id, c.label, n.capacity_of(&c.id)))
            .chain(n.events.iter().map(|e| format!("e {} {}", e.id, e.label)))
            .chain(n.arcs.iter().map(|x| {
                format!("a {} {} {} {}", x.from, x.to, x.effective_weight(), x.inhibitor)
            }))
            .collect()
    };
    a.conditions.len() == b.conditions.len()
        && a.events.len() == b.events.len()
        && a.arcs.len() == b.arcs.len()
        && set(a) == set(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::petri::labeled_isomorphic;

    #[test]
    fn single_event_closure() {
        let net = fixtures::three_event_net();
        let sub = complete_closure(&net, &["v1"]).unwrap();
        assert_eq!(sub.events.len(), 1);
        assert_eq!(sub.conditions.len(), 7);
        assert_eq!(sub.arcs.len(), 7);
        assert!(is_complete_subnet(&net, &sub));
    }

    #[test]
    fn pair_closure_shares_conditions() {
        let net = fixtures::three_event_net();
        let sub = complete_closure(&net, &["v1", "v2"]).unwrap();
        assert_eq!(sub.conditions.len(), 11);
        assert_eq!(sub.arcs.len(), 13);
        assert!(is_complete_subnet(&net, &sub));
    }

    #[test]
    fn full_closure_is_the_net() {
        let net = fixtures::three_event_net();
        let sub = complete_closure(&net, &["v1", "v2", "v3"]).unwrap();
        assert!(labeled_isomorphic(&sub, &net).unwrap());
        assert!(same_by_id(&sub, &net));
    }

    #[test]
    fn closure_is_idempotent() {
        let net = fixtures::three_event_net();
        let once = complete_closure(&net, &["v2", "v3"]).unwrap();
        let twice = complete_closure(&once, &["v2", "v3"]).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn fragment_is_not_complete() {
        let net = fixtures::assembly_net();
        let mut frag = net.clone();
        frag.conditions.retain(|c| c.label.as_str() != "rear wheel");
        frag.arcs.retain(|a| a.from != "rw");
        assert!(!is_complete_subnet(&net, &frag));
        let whole = complete_closure(&net, &["asm"]).unwrap();
        assert!(is_complete_subnet(&net, &whole));
    }

    #[test]
    fn unknown_or_condition_ids_rejected() {
        let net = fixtures::three_event_net();
        assert!(complete_closure(&net, &["nope"]).is_err());
        assert!(complete_closure(&net, &["c1"]).is_err());
    }
}
