use std::collections::HashMap;

use crate::label::Label;

use super::net::{Capacity, Net, NetError, NetIndex};

/// Event-count bound for [`labeled_isomorphic`].
pub const ISO_EVENT_LIMIT: usize = 32;

/// True iff a bijection on conditions and events preserves node kind, labels,
/// arc direction, and arc/condition annotations (weight, inhibitor flag,
/// capacity, with defaults applied). Exhaustive search over event mappings.
pub fn labeled_isomorphic(n1: &Net, n2: &Net) -> Result<bool, NetError> {
    labeled_isomorphic_with_limit(n1, n2, ISO_EVENT_LIMIT)
}

pub fn labeled_isomorphic_with_limit(n1: &Net, n2: &Net, limit: usize) -> Result<bool, NetError> {
    for n in [n1, n2] {
        if n.events.len() > limit {
            return Err(NetError::SizeGuardExceeded {
                found: n.events.len(),
                limit,
            });
        }
    }
    let a = IsoView::new(n1)?;
    let b = IsoView::new(n2)?;
    if n1.events.len() != n2.events.len()
        || n1.conditions.len() != n2.conditions.len()
        || n1.arcs.len() != n2.arcs.len()
        || a.event_sig_multiset() != b.event_sig_multiset()
    {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; a.events.len()];
    let mut used = vec![false; b.events.len()];
    Ok(search(&a, &b, 0, &mut map, &mut used))
}

/// Arc attachment as seen from an event: (is output, inhibitor, weight).
type Port = (bool, bool, u32);
/// Condition identity for matching: label and capacity.
type CondKey = (Label, Capacity);
type Shared = Vec<(CondKey, Port, Port)>;
/// One attachment in an event signature: port, condition key, condition degree.
type SigEntry = (Port, CondKey, usize);

struct IsoView {
    events: Vec<Label>,
    /// Per event, sorted attachments (port, condition key, condition degree).
    sigs: Vec<Vec<SigEntry>>,
    /// Per condition: key plus attachments (event position, port).
    conds: Vec<(CondKey, Vec<(usize, Port)>)>,
    /// Shared-condition fingerprint for each unordered event pair.
    shared: HashMap<(usize, usize), Shared>,
}

impl IsoView {
    fn new(net: &Net) -> Result<Self, NetError> {
        let ix = NetIndex::new(net)?;
        let mut conds: Vec<(CondKey, Vec<(usize, Port)>)> = net
            .conditions
            .iter()
            .map(|c| ((c.label.clone(), net.capacity_of(&c.id)), Vec::new()))
            .collect();
        for (k, arc) in net.arcs.iter().enumerate() {
            let c = ix.arc_condition(k);
            let e = ix.arc_event(k);
            let out = net.conditions[c].id == arc.to;
            conds[c].1.push((e, (out, arc.inhibitor, arc.effective_weight())));
        }
        let mut sigs = vec![Vec::new(); net.events.len()];
        let mut shared: HashMap<(usize, usize), Vec<_>> = HashMap::new();
        for (key, att) in &conds {
            for &(e, p) in att {
                sigs[e].push((p, key.clone(), att.len()));
            }
            for (i, &(e1, p1)) in att.iter().enumerate() {
                for &(e2, p2) in &att[i + 1..] {
                    let (k, v) = if e1 < e2 {
                        ((e1, e2), (key.clone(), p1, p2))
                    } else {
                        ((e2, e1), (key.clone(), p2, p1))
                    };
                    shared.entry(k).or_default().push(v);
                }
            }
        }
        for s in &mut sigs {
            s.sort();
        }
        for v in shared.values_mut() {
            v.sort();
        }
        Ok(IsoView {
            events: net.events.iter().map(|e| e.label.clone()).collect(),
            sigs,
            conds,
            shared,
        })
    }

    fn event_sig_multiset(&self) -> Vec<(&Label, &Vec<SigEntry>)> {
        let mut v: Vec<_> = self.events.iter().zip(&self.sigs).collect();
        v.sort();
        v
    }

    /// Shared fingerprint oriented as (x, y).
    fn shared_between(&self, x: usize, y: usize) -> Vec<(CondKey, Port, Port)> {
        let (k, flip) = if x < y { ((x, y), false) } else { ((y, x), true) };
        match self.shared.get(&k) {
            None => Vec::new(),
            Some(v) if !flip => v.clone(),
            Some(v) => {
                let mut w: Vec<_> = v.iter().map(|(c, p, q)| (c.clone(), *q, *p)).collect();
                w.sort();
                w
            }
        }
    }
}

fn search(a: &IsoView, b: &IsoView, i: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if i == a.events.len() {
        return conditions_match(a, b, map);
    }
    for j in 0..b.events.len() {
        if used[j] || a.events[i] != b.events[j] || a.sigs[i] != b.sigs[j] {
            continue;
        }
        let consistent = (0..i).all(|k| a.shared_between(k, i) == b.shared_between(map[k], j));
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if search(a, b, i + 1, map, used) {
            return true;
        }
        used[j] = false;
    }
    map[i] = usize::MAX;
    false
}

/// With events fixed, conditions match iff their (key, mapped attachments)
/// multisets agree.
fn conditions_match(a: &IsoView, b: &IsoView, map: &[usize]) -> bool {
    let mut left: Vec<(CondKey, Vec<(usize, Port)>)> = a
        .conds
        .iter()
        .map(|(k, att)| {
            let mut v: Vec<_> = att.iter().map(|&(e, p)| (map[e], p)).collect();
            v.sort();
            (k.clone(), v)
        })
        .collect();
    let mut right: Vec<(CondKey, Vec<(usize, Port)>)> = b
        .conds
        .iter()
        .map(|(k, att)| {
            let mut v = att.clone();
            v.sort();
            (k.clone(), v)
        })
        .collect();
    left.sort();
    right.sort();
    left == right
}

/// Cheap isomorphism-invariant fingerprint, used to bucket nets before calling
/// [`labeled_isomorphic`].
pub fn invariant_key(net: &Net) -> Result<String, NetError> {
    let v = IsoView::new(net)?;
    let mut parts: Vec<String> = v
        .event_sig_multiset()
        .into_iter()
        .map(|(l, s)| format!("{l}{s:?}"))
        .collect();
    parts.push(format!("c{}a{}", net.conditions.len(), net.arcs.len()));
    Ok(parts.join("|"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn shuffled(net: &Net) -> Net {
        let mut n = net.clone();
        n.conditions.reverse();
        n.events.rotate_left(1);
        n.arcs.reverse();
        let rename = |s: &str| format!("z{s}");
        for c in &mut n.conditions {
            c.id = rename(&c.id);
        }
        for e in &mut n.events {
            e.id = rename(&e.id);
        }
        for a in &mut n.arcs {
            a.from = rename(&a.from);
            a.to = rename(&a.to);
        }
        n.capacities = n.capacities.into_iter().map(|(k, v)| (rename(&k), v)).collect();
        n
    }

    #[test]
    fn permuted_storage_is_isomorphic() {
        let net = fixtures::three_event_net();
        let other = shuffled(&net);
        assert!(labeled_isomorphic(&net, &other).unwrap());
        assert!(labeled_isomorphic(&other, &net).unwrap());
        assert!(labeled_isomorphic(&net, &net).unwrap());
    }

    #[test]
    fn relabeled_condition_breaks_isomorphism() {
        let net = fixtures::three_event_net();
        let mut other = net.clone();
        other.conditions[0].label = Label::new("c99").unwrap();
        assert!(!labeled_isomorphic(&net, &other).unwrap());
    }

    #[test]
    fn equal_one_completes_with_different_ids() {
        let mut a = Net::new("a");
        a.add_event("e", "T").add_condition("x", "p").add_condition("y", "q");
        a.add_arc("x", "e").add_arc("e", "y");
        let mut b = Net::new("b");
        b.add_condition("k2", "q").add_condition("k1", "p").add_event("f", "T");
        b.add_arc("f", "k2").add_arc("k1", "f");
        assert!(labeled_isomorphic(&a, &b).unwrap());
        assert_eq!(invariant_key(&a).unwrap(), invariant_key(&b).unwrap());
    }

    #[test]
    fn shared_vs_duplicated_condition() {
        // One condition feeding two events differs from two equally labeled
        // conditions each feeding one event.
        let mut a = Net::new("a");
        a.add_event("e1", "T").add_event("e2", "T").add_condition("c", "p");
        a.add_arc("c", "e1").add_arc("c", "e2");
        let mut b = Net::new("b");
        b.add_event("e1", "T").add_event("e2", "T");
        b.add_condition("c1", "p").add_condition("c2", "p");
        b.add_arc("c1", "e1").add_arc("c2", "e2");
        assert!(!labeled_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn annotations_matter() {
        let mut a = Net::new("a");
        a.add_event("e", "T").add_condition("c", "p").add_arc("c", "e");
        let mut b = a.clone();
        b.arcs[0].weight = Some(1);
        assert!(labeled_isomorphic(&a, &b).unwrap());
        b.arcs[0].weight = Some(2);
        assert!(!labeled_isomorphic(&a, &b).unwrap());
        let mut c = a.clone();
        c.arcs[0].inhibitor = true;
        assert!(!labeled_isomorphic(&a, &c).unwrap());
        let mut d = a.clone();
        d.capacities.insert("c".into(), Capacity::Finite(3));
        assert!(!labeled_isomorphic(&a, &d).unwrap());
    }

    #[test]
    fn size_guard() {
        let mut big = Net::new("big");
        for i in 0..33 {
            big.add_event(format!("e{i}"), "T");
        }
        assert!(matches!(
            labeled_isomorphic(&big, &big),
            Err(NetError::SizeGuardExceeded { found: 33, limit: 32 })
        ));
    }
}
