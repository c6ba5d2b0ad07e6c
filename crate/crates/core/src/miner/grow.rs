//! Pattern growth over connected induced sub-net-graphs.
//!
//! A pattern is grown one node at a time; the new node brings every edge it
//! has to nodes already in the pattern, so each pattern is the net graph of a
//! complete subnet. Duplicates are avoided by reverse search: the canonical
//! parent of a pattern is the pattern minus the node visited last by its
//! minimal code, and a child is kept only when it was built from that parent.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dfscode::canon::{min_code, CanonLimits, RCode, RankedGraph};

use super::{MineError, MinerConfig};

/// Dataset view shared by all growth workers.
pub(crate) struct Space<'a> {
    pub graphs: &'a [RankedGraph],
    pub node_ok: &'a [bool],
    pub edge_ok: &'a HashSet<(u32, u32, u32)>,
    pub cfg: &'a MinerConfig,
}

/// Ranked identification of the edge `a -e-> b` seen from `a`, with the
/// reverse rendering `f` seen from `b`.
pub(crate) fn ident(a: u32, e: u32, f: u32, b: u32) -> (u32, u32, u32) {
    (a, e, b).min((b, f, a))
}

#[derive(Debug, Clone)]
pub(crate) enum Embeddings {
    /// Flattened maps, `k` graph nodes per embedding, with the graph of each.
    Full { graph: Vec<u32>, maps: Vec<u32> },
    /// Too many to keep; recomputed from supporters on demand.
    Lazy,
}

#[derive(Debug, Clone)]
pub(crate) struct Pat {
    /// Node ranks in canonical (minimal code) order.
    pub ranks: Vec<u32>,
    /// `(i, j, rank seen from i, rank seen from j)` with `i < j`.
    pub edges: Vec<(u32, u32, u32, u32)>,
    pub code: RCode,
    pub supporters: Vec<u32>,
    pub emb: Embeddings,
}

impl Pat {
    fn graph(&self) -> RankedGraph {
        RankedGraph::from_parts(self.ranks.clone(), &self.edges)
    }
}

/// A mined pattern without embeddings.
#[derive(Debug, Clone)]
pub(crate) struct Found {
    pub ranks: Vec<u32>,
    pub edges: Vec<(u32, u32, u32, u32)>,
    pub code: RCode,
    pub supporters: Vec<u32>,
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct GrowStats {
    pub embeddings_peak: usize,
    pub lazy_patterns: usize,
    pub rejected_children: usize,
}

/// Seed pattern for a single frequent node rank.
pub(crate) fn seed(space: &Space<'_>, rank: u32, occurrences: &[(u32, u32)]) -> Pat {
    let mut supporters: Vec<u32> = occurrences.iter().map(|o| o.0).collect();
    supporters.dedup();
    let emb = if occurrences.len() > space.cfg.max_embeddings {
        Embeddings::Lazy
    } else {
        Embeddings::Full {
            graph: occurrences.iter().map(|o| o.0).collect(),
            maps: occurrences.iter().map(|o| o.1).collect(),
        }
    };
    Pat {
        ranks: vec![rank],
        edges: Vec::new(),
        code: RCode {
            root: rank,
            units: Vec::new(),
        },
        supporters,
        emb,
    }
}

/// Child key: rank of the new node and its attachments
/// `(pattern node, rank seen from it, rank seen from the new node)`.
type Signature = (u32, Vec<(u32, u32, u32)>);

struct ChildAcc {
    graph: Vec<u32>,
    maps: Vec<u32>,
    lazy: bool,
    supporters: Vec<u32>,
}

impl ChildAcc {
    fn new() -> Self {
        ChildAcc {
            graph: Vec::new(),
            maps: Vec::new(),
            lazy: false,
            supporters: Vec::new(),
        }
    }

    fn push(&mut self, g: u32, map: &[u32], w: u32, cap: usize, k1: usize) {
        if self.supporters.last() != Some(&g) {
            self.supporters.push(g);
        }
        if self.lazy {
            return;
        }
        self.graph.push(g);
        self.maps.extend_from_slice(map);
        self.maps.push(w);
        if self.graph.len() > cap {
            self.lazy = true;
            self.graph = Vec::new();
            self.maps = Vec::new();
        }
        debug_assert!(self.lazy || self.maps.len() == self.graph.len() * k1);
    }
}

/// Grows the whole subtree under `root`, returning every frequent pattern in
/// it (including `root`).
pub(crate) fn grow_subtree(space: &Space<'_>, root: Pat) -> Result<(Vec<Found>, GrowStats), MineError> {
    let mut out = Vec::new();
    let mut stats = GrowStats::default();
    let mut stack = vec![root];
    while let Some(p) = stack.pop() {
        if let Embeddings::Full { graph, .. } = &p.emb {
            stats.embeddings_peak = stats.embeddings_peak.max(graph.len() * p.ranks.len());
        } else {
            stats.lazy_patterns += 1;
        }
        let can_grow = space.cfg.max_nodes.is_none_or(|m| p.ranks.len() < m);
        if can_grow {
            let mut kids = children(space, &p, &mut stats)?;
            // Reverse so the smallest child is explored first.
            kids.reverse();
            stack.extend(kids);
        }
        out.push(Found {
            ranks: p.ranks,
            edges: p.edges,
            code: p.code,
            supporters: p.supporters,
        });
    }
    Ok((out, stats))
}

/// Calls `f(graph, map)` for every embedding of `p`, recomputing lazy ones.
fn for_each_embedding(space: &Space<'_>, p: &Pat, mut f: impl FnMut(u32, &[u32])) {
    let k = p.ranks.len();
    match &p.emb {
        Embeddings::Full { graph, maps } => {
            for (n, &g) in graph.iter().enumerate() {
                f(g, &maps[n * k..(n + 1) * k]);
            }
        }
        Embeddings::Lazy => {
            let pg = p.graph();
            for &g in &p.supporters {
                match_induced(&pg, &space.graphs[g as usize], |m| f(g, m));
            }
        }
    }
}

fn children(space: &Space<'_>, p: &Pat, stats: &mut GrowStats) -> Result<Vec<Pat>, MineError> {
    let k = p.ranks.len();
    let cap = space.cfg.max_embeddings;
    let mut acc: HashMap<Signature, ChildAcc> = HashMap::new();
    let mut seen_w: Vec<u32> = Vec::new();
    let mut att: Vec<(u32, u32, u32)> = Vec::new();
    for_each_embedding(space, p, |g, map| {
        let rg = &space.graphs[g as usize];
        seen_w.clear();
        for &x in map {
            for &(w, _, _) in &rg.adj[x as usize] {
                if map.contains(&w) || seen_w.contains(&w) {
                    continue;
                }
                seen_w.push(w);
                let rw = rg.node_rank[w as usize];
                if !space.node_ok[rw as usize] {
                    continue;
                }
                att.clear();
                let mut ok = true;
                for (i, &y) in map.iter().enumerate() {
                    if let Some(e_yw) = rg.edge_between(y, w) {
                        let e_wy = rg.edge_between(w, y).expect("edges are symmetric");
                        if !space.edge_ok.contains(&ident(p.ranks[i], e_yw, e_wy, rw)) {
                            ok = false;
                            break;
                        }
                        att.push((i as u32, e_yw, e_wy));
                    }
                }
                if !ok {
                    continue;
                }
                acc.entry((rw, att.clone()))
                    .or_insert_with(ChildAcc::new)
                    .push(g, map, w, cap, k + 1);
            }
        }
    });

    // Children that share a canonical code are merged.
    let mut by_code: BTreeMap<RCode, (Pat, Vec<u32>, Vec<u32>)> = BTreeMap::new();
    let mut sigs: Vec<(Signature, ChildAcc)> = acc
        .into_iter()
        .filter(|(_, a)| a.supporters.len() >= space.cfg.minsup)
        .collect();
    sigs.sort_by(|a, b| a.0.cmp(&b.0));
    for ((rw, attach), a) in sigs {
        let mut ranks = p.ranks.clone();
        ranks.push(rw);
        let mut edges = p.edges.clone();
        for &(i, e_iw, e_wi) in &attach {
            edges.push((i, k as u32, e_iw, e_wi));
        }
        let child = RankedGraph::from_parts(ranks.clone(), &edges);
        let (code, seq) = min_code(&child, space.cfg.canon)?;
        let last = *seq.last().expect("nonempty");
        if last as usize != k && !parent_matches(&ranks, &edges, last, &p.code, space.cfg.canon)? {
            stats.rejected_children += 1;
            continue;
        }
        // perm[old index] = canonical position
        let mut perm = vec![0u32; k + 1];
        for (pos, &node) in seq.iter().enumerate() {
            perm[node as usize] = pos as u32;
        }
        let c_ranks: Vec<u32> = seq.iter().map(|&x| ranks[x as usize]).collect();
        let mut c_edges: Vec<(u32, u32, u32, u32)> = edges
            .iter()
            .map(|&(i, j, fi, fj)| {
                let (pi, pj) = (perm[i as usize], perm[j as usize]);
                if pi < pj {
                    (pi, pj, fi, fj)
                } else {
                    (pj, pi, fj, fi)
                }
            })
            .collect();
        c_edges.sort_unstable();
        let entry = by_code.entry(code.clone()).or_insert_with(|| {
            (
                Pat {
                    ranks: c_ranks,
                    edges: c_edges,
                    code,
                    supporters: Vec::new(),
                    emb: Embeddings::Full {
                        graph: Vec::new(),
                        maps: Vec::new(),
                    },
                },
                Vec::new(),
                Vec::new(),
            )
        });
        entry.2.extend_from_slice(&a.supporters);
        if a.lazy {
            entry.0.emb = Embeddings::Lazy;
        }
        if let Embeddings::Full { .. } = entry.0.emb {
            let k1 = k + 1;
            for (n, &g) in a.graph.iter().enumerate() {
                let old = &a.maps[n * k1..(n + 1) * k1];
                let start = entry.1.len();
                entry.1.resize(start + k1, 0);
                for (x, &node) in old.iter().enumerate() {
                    entry.1[start + perm[x] as usize] = node;
                }
                if let Embeddings::Full { graph, .. } = &mut entry.0.emb {
                    graph.push(g);
                }
            }
        }
    }

    let mut out = Vec::with_capacity(by_code.len());
    for (_, (mut pat, maps, mut supporters)) in by_code {
        supporters.sort_unstable();
        supporters.dedup();
        pat.supporters = supporters;
        if let Embeddings::Full { graph, .. } = &pat.emb {
            let k1 = pat.ranks.len();
            let mut rows: Vec<(u32, &[u32])> = graph
                .iter()
                .enumerate()
                .map(|(n, &g)| (g, &maps[n * k1..(n + 1) * k1]))
                .collect();
            rows.sort_unstable();
            rows.dedup();
            if rows.len() > cap {
                pat.emb = Embeddings::Lazy;
            } else {
                let graph = rows.iter().map(|r| r.0).collect();
                let maps = rows.iter().flat_map(|r| r.1.iter().copied()).collect();
                pat.emb = Embeddings::Full { graph, maps };
            }
        }
        out.push(pat);
    }
    Ok(out)
}

/// True when removing `last` from the child leaves a graph whose minimal code
/// is `parent`.
fn parent_matches(
    ranks: &[u32],
    edges: &[(u32, u32, u32, u32)],
    last: u32,
    parent: &RCode,
    limits: CanonLimits,
) -> Result<bool, MineError> {
    let idx = |x: u32| if x > last { x - 1 } else { x };
    let r: Vec<u32> = ranks
        .iter()
        .enumerate()
        .filter(|(i, _)| *i as u32 != last)
        .map(|(_, &r)| r)
        .collect();
    let e: Vec<(u32, u32, u32, u32)> = edges
        .iter()
        .filter(|&&(i, j, _, _)| i != last && j != last)
        .map(|&(i, j, a, b)| (idx(i), idx(j), a, b))
        .collect();
    let g = RankedGraph::from_parts(r, &e);
    if e.is_empty() {
        return Ok(parent.units.is_empty() && g.node_rank.first() == Some(&parent.root));
    }
    Ok(&min_code(&g, limits)?.0 == parent)
}

/// Every induced embedding of `pat` (canonical order, so each node after the
/// first has an earlier neighbor) into `g`.
pub(crate) fn match_induced(pat: &RankedGraph, g: &RankedGraph, mut f: impl FnMut(&[u32])) {
    let k = pat.len();
    if k == 0 {
        return;
    }
    // anchor[i]: an earlier neighbor of node i.
    let anchor: Vec<Option<u32>> = (0..k)
        .map(|i| pat.adj[i].iter().map(|x| x.0).filter(|&j| (j as usize) < i).min())
        .collect();
    let mut map = vec![u32::MAX; k];
    fn rec(
        i: usize,
        pat: &RankedGraph,
        g: &RankedGraph,
        anchor: &[Option<u32>],
        map: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]),
    ) {
        if i == pat.len() {
            f(map);
            return;
        }
        let cands: Vec<u32> = match anchor[i] {
            None => (0..g.len() as u32).collect(),
            Some(a) => g.adj[map[a as usize] as usize].iter().map(|x| x.0).collect(),
        };
        'cand: for c in cands {
            if g.node_rank[c as usize] != pat.node_rank[i] || map[..i].contains(&c) {
                continue;
            }
            for (j, &mj) in map[..i].iter().enumerate() {
                let want = pat.edge_between(j as u32, i as u32);
                let have = g.edge_between(mj, c);
                if want != have {
                    continue 'cand;
                }
                if want.is_some() && pat.edge_between(i as u32, j as u32) != g.edge_between(c, mj) {
                    continue 'cand;
                }
            }
            map[i] = c;
            rec(i + 1, pat, g, anchor, map, f);
        }
        map[i] = u32::MAX;
    }
    rec(0, pat, g, &anchor, &mut map, &mut f);
}
