//! Canonical traversal over integer-ranked graphs.
//!
//! Node renderings and directed edge taggings are replaced by their ranks in a
//! sorted [`Alphabet`], so unit comparison is integer comparison.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::netgraph::{EdgeTagging, NetGraph, NodeRendering};

use super::DfsError;

/// Sorted, deduplicated node renderings and directed edge taggings.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    pub(crate) nodes: Vec<NodeRendering>,
    pub(crate) edges: Vec<EdgeTagging>,
    node_ix: HashMap<NodeRendering, u32>,
    edge_ix: HashMap<EdgeTagging, u32>,
}

impl Alphabet {
    pub fn build<'a>(graphs: impl IntoIterator<Item = &'a NetGraph>) -> Self {
        let mut nodes = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for g in graphs {
            for n in &g.nodes {
                nodes.insert(n.rendering());
            }
            for e in &g.edges {
                let t = e.tagging_from(e.u);
                edges.insert(t.flipped());
                edges.insert(t);
            }
        }
        let nodes: Vec<_> = nodes.into_iter().collect();
        let edges: Vec<_> = edges.into_iter().collect();
        let node_ix = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
        let edge_ix = edges.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        Alphabet {
            nodes,
            edges,
            node_ix,
            edge_ix,
        }
    }

    pub fn node_rank(&self, r: &NodeRendering) -> Option<u32> {
        self.node_ix.get(r).copied()
    }

    pub fn edge_rank(&self, t: &EdgeTagging) -> Option<u32> {
        self.edge_ix.get(t).copied()
    }

    pub fn node(&self, rank: u32) -> &NodeRendering {
        &self.nodes[rank as usize]
    }

    pub fn edge(&self, rank: u32) -> &EdgeTagging {
        &self.edges[rank as usize]
    }
}

/// A net graph with ranks in place of renderings.
#[derive(Debug, Clone)]
pub struct RankedGraph {
    pub node_rank: Vec<u32>,
    /// Per node: `(neighbor, rank of the edge tagging seen from this node, edge id)`,
    /// sorted by neighbor.
    pub adj: Vec<Vec<(u32, u32, u32)>>,
    pub n_edges: usize,
}

impl RankedGraph {
    /// Panics if `alpha` lacks a rendering of `ng`.
    pub fn new(ng: &NetGraph, alpha: &Alphabet) -> Self {
        let node_rank = ng
            .nodes
            .iter()
            .map(|n| alpha.node_rank(&n.rendering()).expect("node in alphabet"))
            .collect();
        let mut adj = vec![Vec::new(); ng.nodes.len()];
        for (k, e) in ng.edges.iter().enumerate() {
            let t = e.tagging_from(e.u);
            let fwd = alpha.edge_rank(&t).expect("edge in alphabet");
            let back = alpha.edge_rank(&t.flipped()).expect("edge in alphabet");
            adj[e.u].push((e.v as u32, fwd, k as u32));
            adj[e.v].push((e.u as u32, back, k as u32));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        RankedGraph {
            node_rank,
            adj,
            n_edges: ng.edges.len(),
        }
    }

    pub fn from_parts(node_rank: Vec<u32>, edges: &[(u32, u32, u32, u32)]) -> Self {
        // edges: (u, v, rank seen from u, rank seen from v)
        let mut adj = vec![Vec::new(); node_rank.len()];
        for (k, &(u, v, fu, fv)) in edges.iter().enumerate() {
            adj[u as usize].push((v, fu, k as u32));
            adj[v as usize].push((u, fv, k as u32));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        RankedGraph {
            node_rank,
            adj,
            n_edges: edges.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.node_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_rank.is_empty()
    }

    pub fn edge_between(&self, u: u32, v: u32) -> Option<u32> {
        let a = &self.adj[u as usize];
        a.binary_search_by_key(&v, |x| x.0).ok().map(|i| a[i].1)
    }

    pub fn is_connected(&self) -> bool {
        if self.node_rank.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut n = 1;
        while let Some(x) = stack.pop() {
            for &(w, _, _) in &self.adj[x] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    n += 1;
                    stack.push(w as usize);
                }
            }
        }
        n == self.len()
    }
}

/// Code unit over ranks: orders `i -> j`, front rank `a`, edge rank `e`,
/// rear rank `b`. Ordered by `(i, a, e, b, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RUnit {
    pub i: u32,
    pub j: u32,
    pub a: u32,
    pub e: u32,
    pub b: u32,
}

impl RUnit {
    fn key(&self) -> (u32, u32, u32, u32, u32) {
        (self.i, self.a, self.e, self.b, self.j)
    }
}

impl Ord for RUnit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for RUnit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A ranked code: the rank of the order-0 node followed by the units. For a
/// single node there are no units.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RCode {
    pub root: u32,
    pub units: Vec<RUnit>,
}

/// Limits for the canonical search.
#[derive(Debug, Clone, Copy)]
pub struct CanonLimits {
    /// Largest number of simultaneously tied partial traversals.
    pub max_states: usize,
}

impl Default for CanonLimits {
    fn default() -> Self {
        CanonLimits { max_states: 1 << 20 }
    }
}

const NONE: u32 = u32::MAX;

#[derive(Clone)]
struct State {
    order: Vec<u32>,
    seq: Vec<u32>,
    used: Vec<bool>,
    stack: Vec<u32>,
    cur: u32,
}

impl State {
    fn start(g: &RankedGraph, s: u32) -> Self {
        let mut order = vec![NONE; g.len()];
        order[s as usize] = 0;
        State {
            order,
            seq: vec![s],
            used: vec![false; g.n_edges],
            stack: Vec::new(),
            cur: s,
        }
    }

    /// Pops until the current node has an untraversed edge. Returns false
    /// when the traversal is exhausted.
    fn settle(&mut self, g: &RankedGraph) -> bool {
        loop {
            if g.adj[self.cur as usize].iter().any(|&(_, _, k)| !self.used[k as usize]) {
                return true;
            }
            match self.stack.pop() {
                Some(p) => self.cur = p,
                None => return false,
            }
        }
    }

    /// Admissible next units at a settled state: untraversed edges to visited
    /// nodes when any exist, otherwise edges to new nodes.
    fn moves(&self, g: &RankedGraph, out: &mut Vec<(RUnit, u32, u32)>) {
        out.clear();
        let c = self.cur as usize;
        let i = self.order[c];
        let a = g.node_rank[c];
        for &(w, e, k) in &g.adj[c] {
            if !self.used[k as usize] && self.order[w as usize] != NONE {
                let j = self.order[w as usize];
                out.push((RUnit { i, j, a, e, b: g.node_rank[w as usize] }, w, k));
            }
        }
        if !out.is_empty() {
            return;
        }
        let j = self.seq.len() as u32;
        for &(w, e, k) in &g.adj[c] {
            if !self.used[k as usize] {
                out.push((RUnit { i, j, a, e, b: g.node_rank[w as usize] }, w, k));
            }
        }
    }

    fn apply(&mut self, w: u32, k: u32) {
        self.used[k as usize] = true;
        if self.order[w as usize] == NONE {
            self.order[w as usize] = self.seq.len() as u32;
            self.seq.push(w);
        }
        self.stack.push(self.cur);
        self.cur = w;
    }
}

/// Minimal ranked code of a connected graph, with the node visited at each
/// order. Ties that survive to the end resolve toward smaller node indices.
pub fn min_code(g: &RankedGraph, limits: CanonLimits) -> Result<(RCode, Vec<u32>), DfsError> {
    if g.is_empty() {
        return Err(DfsError::NoEdges);
    }
    if !g.is_connected() {
        return Err(DfsError::Disconnected);
    }
    let root = *g.node_rank.iter().min().expect("nonempty");
    let mut frontier: Vec<State> = (0..g.len() as u32)
        .filter(|&s| g.node_rank[s as usize] == root)
        .map(|s| State::start(g, s))
        .collect();
    let mut units = Vec::with_capacity(g.n_edges);
    let mut buf = Vec::new();
    for _ in 0..g.n_edges {
        let mut best: Option<RUnit> = None;
        let mut next: Vec<State> = Vec::new();
        for mut st in frontier {
            let live = st.settle(g);
            debug_assert!(live, "connected graph has edges left");
            st.moves(g, &mut buf);
            let Some(local) = buf.iter().map(|m| m.0).min() else {
                continue;
            };
            match best.map(|b| local.cmp(&b)) {
                Some(Ordering::Greater) => continue,
                Some(Ordering::Less) | None => {
                    best = Some(local);
                    next.clear();
                }
                Some(Ordering::Equal) => {}
            }
            for &(u, w, k) in buf.iter().filter(|m| m.0 == local) {
                debug_assert_eq!(u, local);
                let mut child = st.clone();
                child.apply(w, k);
                next.push(child);
                if next.len() > limits.max_states {
                    return Err(DfsError::SizeGuardExceeded {
                        what: "tied traversals",
                        found: next.len(),
                        limit: limits.max_states,
                    });
                }
            }
        }
        units.push(best.expect("some move exists"));
        frontier = next;
    }
    let seq = frontier.swap_remove(0).seq;
    Ok((RCode { root, units }, seq))
}

/// Minimal code where only the first admissible minimum is followed at every
/// step. Not guaranteed canonical; used where only unit contents matter.
pub fn greedy_code(g: &RankedGraph) -> Result<(RCode, Vec<u32>), DfsError> {
    if g.is_empty() {
        return Err(DfsError::NoEdges);
    }
    if !g.is_connected() {
        return Err(DfsError::Disconnected);
    }
    let root = *g.node_rank.iter().min().expect("nonempty");
    let s = g.node_rank.iter().position(|&r| r == root).expect("root exists") as u32;
    let mut st = State::start(g, s);
    let mut units = Vec::with_capacity(g.n_edges);
    let mut buf = Vec::new();
    for _ in 0..g.n_edges {
        st.settle(g);
        st.moves(g, &mut buf);
        let &(u, w, k) = buf.iter().min_by_key(|m| m.0).expect("move exists");
        units.push(u);
        st.apply(w, k);
    }
    Ok((RCode { root, units }, st.seq))
}

/// Every code produced by an admissible traversal from any start node.
pub fn all_codes(g: &RankedGraph, max_codes: usize) -> Result<BTreeSet<RCode>, DfsError> {
    if g.is_empty() {
        return Err(DfsError::NoEdges);
    }
    if !g.is_connected() {
        return Err(DfsError::Disconnected);
    }
    let mut out = BTreeSet::new();
    let mut leaves = 0usize;
    for s in 0..g.len() as u32 {
        let mut units = Vec::with_capacity(g.n_edges);
        walk(g, State::start(g, s), &mut units, &mut out, &mut leaves, max_codes)?;
    }
    Ok(out)
}

fn walk(
    g: &RankedGraph,
    mut st: State,
    units: &mut Vec<RUnit>,
    out: &mut BTreeSet<RCode>,
    leaves: &mut usize,
    max_codes: usize,
) -> Result<(), DfsError> {
    if units.len() == g.n_edges {
        *leaves += 1;
        if *leaves > max_codes {
            return Err(DfsError::SizeGuardExceeded {
                what: "traversals",
                found: *leaves,
                limit: max_codes,
            });
        }
        out.insert(RCode {
            root: g.node_rank[st.seq[0] as usize],
            units: units.clone(),
        });
        return Ok(());
    }
    st.settle(g);
    let mut moves = Vec::new();
    st.moves(g, &mut moves);
    for (u, w, k) in moves {
        let mut child = st.clone();
        child.apply(w, k);
        units.push(u);
        walk(g, child, units, out, leaves, max_codes)?;
        units.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> RankedGraph {
        // 0 - 1 - 2, ranks 5, 1, 5; symmetric edge ranks.
        RankedGraph::from_parts(vec![5, 1, 5], &[(0, 1, 0, 0), (1, 2, 0, 0)])
    }

    #[test]
    fn min_matches_enumeration_on_path() {
        let g = path3();
        let (code, seq) = min_code(&g, CanonLimits::default()).unwrap();
        let all = all_codes(&g, 1000).unwrap();
        assert_eq!(&code, all.iter().next().unwrap());
        assert_eq!(seq[0], 1);
        assert_eq!(code.root, 1);
    }

    #[test]
    fn two_node_graph_has_two_codes() {
        let g = RankedGraph::from_parts(vec![0, 1], &[(0, 1, 3, 4)]);
        assert_eq!(all_codes(&g, 10).unwrap().len(), 2);
        let (code, _) = min_code(&g, CanonLimits::default()).unwrap();
        assert_eq!(code.units, vec![RUnit { i: 0, j: 1, a: 0, e: 3, b: 1 }]);
    }

    #[test]
    fn disconnected_rejected() {
        let g = RankedGraph::from_parts(vec![0, 1, 2], &[(0, 1, 0, 0)]);
        assert!(matches!(min_code(&g, CanonLimits::default()), Err(DfsError::Disconnected)));
    }

    #[test]
    fn state_guard() {
        // Complete graph on 7 identical nodes ties everywhere.
        let mut edges = Vec::new();
        for u in 0..7 {
            for v in u + 1..7 {
                edges.push((u, v, 0, 0));
            }
        }
        let g = RankedGraph::from_parts(vec![0; 7], &edges);
        let r = min_code(&g, CanonLimits { max_states: 10 });
        assert!(matches!(r, Err(DfsError::SizeGuardExceeded { .. })));
    }
}
