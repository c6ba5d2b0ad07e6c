use serde::Serialize;

use super::net::{Net, NetError, NetIndex, NodeRef};

/// Structural subclass flags of a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubclassReport {
    pub is_pure: bool,
    pub is_connected: bool,
    pub is_strongly_connected: bool,
    pub is_s_graph: bool,
    pub is_t_graph: bool,
    pub is_free_choice: bool,
    pub is_occurrence: bool,
}

pub fn validate_and_classify(net: &Net) -> Result<SubclassReport, NetError> {
    let ix = NetIndex::new(net)?;
    Ok(classify(&ix))
}

pub(crate) fn classify(ix: &NetIndex<'_>) -> SubclassReport {
    let net = ix.net;
    let n_cond = net.conditions.len();
    let n = ix.node_count();
    // Nodes are numbered conditions first, then events.
    let num = |r: NodeRef| match r {
        NodeRef::Condition(c) => c,
        NodeRef::Event(e) => n_cond + e,
    };
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for k in 0..net.arcs.len() {
        let (a, b) = ix.arc_ends(k);
        succ[num(a)].push(num(b));
        pred[num(b)].push(num(a));
    }
    let reach = |adj: &[Vec<usize>], both: Option<&[Vec<usize>]>| -> usize {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            let extra = both.map(|o| o[x].as_slice()).unwrap_or(&[]);
            for &y in adj[x].iter().chain(extra) {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    };
    let is_connected = reach(&succ, Some(&pred)) == n;
    let is_strongly_connected = is_connected && reach(&succ, None) == n && reach(&pred, None) == n;

    let is_s_graph = (0..net.events.len()).all(|e| {
        ix.event_in[e].len() == 1 && ix.event_out[e].len() == 1
    });
    let is_t_graph = (0..n_cond).all(|c| ix.cond_in[c].len() == 1 && ix.cond_out[c].len() == 1);
    let is_free_choice = (0..n_cond).all(|c| {
        ix.cond_out[c].len() < 2
            || ix.cond_out[c]
                .iter()
                .all(|&a| ix.event_in[ix.arc_event(a)].len() == 1)
    });
    let is_occurrence = (0..n_cond).all(|c| ix.cond_in[c].len() <= 1 && ix.cond_out[c].len() <= 1)
        && is_acyclic(&succ);

    SubclassReport {
        is_pure: ix.is_pure(),
        is_connected,
        is_strongly_connected,
        is_s_graph,
        is_t_graph,
        is_free_choice,
        is_occurrence,
    }
}

fn is_acyclic(succ: &[Vec<usize>]) -> bool {
    let mut indeg = vec![0usize; succ.len()];
    for s in succ {
        for &y in s {
            indeg[y] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..succ.len()).filter(|&x| indeg[x] == 0).collect();
    let mut done = 0;
    while let Some(x) = queue.pop() {
        done += 1;
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push(y);
            }
        }
    }
    done == succ.len()
}

/// Pre-set and post-set of a node, as node ids.
pub fn adjacency(net: &Net, node_id: &str) -> Result<(Vec<String>, Vec<String>), NetError> {
    let ix = NetIndex::new(net)?;
    let (ins, outs) = match ix.lookup(node_id)? {
        NodeRef::Condition(c) => (&ix.cond_in[c], &ix.cond_out[c]),
        NodeRef::Event(e) => (&ix.event_in[e], &ix.event_out[e]),
    };
    let pre = ins.iter().map(|&a| net.arcs[a].from.clone()).collect();
    let post = outs.iter().map(|&a| net.arcs[a].to.clone()).collect();
    Ok((pre, post))
}
