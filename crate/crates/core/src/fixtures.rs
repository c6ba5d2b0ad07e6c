//! Small reference nets and net graphs, shared by tests, benches and docs.

use crate::netgraph::{parse_edge_tagging, parse_node_rendering, NetGraph, NgEdge, NgNode};
use crate::petri::{Capacity, Net};

/// Three events `v1, v2, v3` over conditions `c1..c12` (condition ids equal
/// their labels). Every pair of events shares a condition.
pub fn three_event_net() -> Net {
    let mut n = Net::new("fig3");
    for e in ["v1", "v2", "v3"] {
        n.add_event(e, e);
    }
    for i in 1..=12 {
        let c = format!("c{i}");
        n.add_condition(c.clone(), &c);
    }
    let arcs = [
        ("c1", "v1"),
        ("c2", "v1"),
        ("c9", "v1"),
        ("v1", "c3"),
        ("v1", "c4"),
        ("v1", "c5"),
        ("v1", "c6"),
        ("c8", "v2"),
        ("c9", "v2"),
        ("v2", "c6"),
        ("v2", "c10"),
        ("v2", "c11"),
        ("v2", "c12"),
        ("c6", "v3"),
        ("c7", "v3"),
        ("v3", "c8"),
        ("v3", "c9"),
        ("v3", "c10"),
    ];
    for (a, b) in arcs {
        n.add_arc(a, b);
    }
    n
}

/// A single `assemble` event consuming two wheels and a frame.
pub fn assembly_net() -> Net {
    let mut n = Net::new("bike");
    n.add_event("asm", "assemble");
    n.add_condition("fw", "front wheel")
        .add_condition("fr", "frame")
        .add_condition("rw", "rear wheel")
        .add_condition("bk", "bike");
    n.add_arc("fw", "asm").add_arc("fr", "asm").add_arc("rw", "asm").add_arc("asm", "bk");
    n
}

/// Builds a net graph from `(id, rendering)` nodes and `(u, v, tagging from u)` edges.
pub fn netgraph_from_renderings(id: &str, nodes: &[(&str, &str)], edges: &[(&str, &str, &str)]) -> NetGraph {
    let pos = |x: &str| nodes.iter().position(|(n, _)| *n == x).expect("known node");
    let nodes_v: Vec<NgNode> = nodes
        .iter()
        .map(|(nid, r)| {
            let r = parse_node_rendering(r).expect("valid node rendering");
            NgNode {
                id: nid.to_string(),
                label: r.label,
                tagging: r.tagging,
            }
        })
        .collect();
    let edges = edges
        .iter()
        .map(|(u, v, t)| NgEdge::from_tagging(pos(u), pos(v), &parse_edge_tagging(t).expect("valid tagging")))
        .collect();
    let universe = nodes_v
        .iter()
        .flat_map(|n| n.tagging.iter().map(|s| s.label.clone()))
        .collect();
    NetGraph {
        id: id.to_string(),
        nodes: nodes_v,
        edges,
        universe,
    }
}

/// Six-event net graph over condition labels `a..u`.
pub fn six_event_graph() -> NetGraph {
    netgraph_from_renderings(
        "K",
        &[
            ("e1", "e1(-s,+q)"),
            ("e2", "e2(-e,-n,-o,-r,+c,+d,+q)"),
            ("e3", "e3(-a,-l,-n,+b,+t)"),
            ("e4", "e4(-m,+k,+n,+p,+q,+u)"),
            ("e5", "e5(-q,-s,+f,+g,+h,+i,+r)"),
            ("e6", "e6(-m,-n,-o,-p,+l,+t)"),
        ],
        &[
            ("e1", "e5", "((-,s,-),(+,q,-))"),
            ("e5", "e2", "((-,q,+),(+,r,-))"),
            ("e2", "e1", "((+,q,+))"),
            ("e1", "e4", "((+,q,+))"),
            ("e4", "e2", "((-,n,+))"),
            ("e2", "e3", "((-,n,-))"),
            ("e3", "e6", "((-,l,+),(+,t,+))"),
            ("e6", "e4", "((-,m,-),(-,p,+))"),
            ("e6", "e2", "((-,n,-),(-,o,-))"),
        ],
    )
}

/// Two place/transition events sharing places `s6` and `s9`, with explicit
/// capacities and weights everywhere.
pub fn weighted_net() -> Net {
    let mut n = Net::new("pt");
    n.add_event("t1", "t1").add_event("t2", "t2");
    for (i, cap) in [(6, 6), (8, 8), (9, 9), (10, 10), (11, 11), (12, 12), (1, 1), (2, 2)] {
        let id = format!("s{i}");
        n.add_condition(id.clone(), &id);
        n.capacities.insert(id, Capacity::Finite(cap));
    }
    let mut arc = |from: &str, to: &str, w: u32| {
        n.add_arc(from, to);
        n.arcs.last_mut().unwrap().weight = Some(w);
    };
    arc("s8", "t2", 13);
    arc("s9", "t2", 14);
    arc("t2", "s6", 18);
    arc("t2", "s10", 15);
    arc("t2", "s11", 16);
    arc("t2", "s12", 17);
    arc("s9", "t1", 2);
    arc("t1", "s6", 6);
    arc("s1", "t1", 3);
    arc("t1", "s2", 4);
    n
}
