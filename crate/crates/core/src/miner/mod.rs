//! Frequent complete subnet mining over a collection of net graphs.
//!
//! Support is the number of distinct input graphs containing a pattern.
//! Patterns are connected induced sub-net-graphs, i.e. net graphs of
//! connected complete subnets, bucketed by edge count.

mod grow;
mod results;

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dfscode::canon::{greedy_code, min_code, Alphabet, CanonLimits, RCode, RankedGraph};
use crate::dfscode::{render_code, DfsCode, DfsCodeUnit, DfsError, EdgeIdentification};
use crate::netgraph::{net_to_netgraph, NetGraph, NetGraphError, NodeRendering};
use crate::par::{map_slice, Parallelism};
use crate::petri::Net;

pub use results::{pattern_to_net, patterns_to_subnets, results_json, PatternJson, ResultsJson, Subnet};

use grow::{grow_subtree, ident, seed, Space};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MineError {
    #[error("no input net graphs")]
    EmptyInput,
    #[error("minimum support must be at least 1")]
    ZeroMinsup,
    #[error("input {index}: {source}")]
    Input {
        index: usize,
        #[source]
        source: NetGraphError,
    },
    #[error(transparent)]
    Dfs(#[from] DfsError),
    #[error(transparent)]
    NetGraph(#[from] NetGraphError),
}

#[derive(Debug, Clone, Copy)]
pub struct MinerConfig {
    pub minsup: usize,
    /// Largest pattern, in events. `None` grows until support runs out.
    pub max_nodes: Option<usize>,
    /// Per-pattern cap on stored embeddings; above it embeddings are
    /// recomputed from the supporting graphs when needed.
    pub max_embeddings: usize,
    pub parallelism: Parallelism,
    pub canon: CanonLimits,
}

impl MinerConfig {
    pub fn new(minsup: usize) -> Self {
        MinerConfig {
            minsup,
            max_nodes: None,
            max_embeddings: 1 << 20,
            parallelism: Parallelism::default(),
            canon: CanonLimits::default(),
        }
    }
}

/// Canonical form of a pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatternCode {
    /// A lone event (no edges).
    Node(NodeRendering),
    /// Minimal DFS code without graph ids.
    Code(DfsCode),
}

impl PatternCode {
    pub fn edges(&self) -> usize {
        match self {
            PatternCode::Node(_) => 0,
            PatternCode::Code(c) => c.len(),
        }
    }

    pub fn unit_strings(&self) -> Vec<String> {
        match self {
            PatternCode::Node(r) => vec![r.to_string()],
            PatternCode::Code(c) => c.unit_strings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub code: PatternCode,
    pub nodes: usize,
    pub support: usize,
    /// Ids of supporting inputs, in input order.
    pub supporters: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MineStats {
    pub patterns: usize,
    /// Largest embedding table held by one pattern, in stored node slots.
    pub embeddings_peak: usize,
    pub lazy_patterns: usize,
    /// Candidates dropped because another parent owns them.
    pub rejected_children: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningResult {
    pub minsup: usize,
    pub inputs: usize,
    /// `fd[j]` holds the patterns with `j` edges, sorted by code.
    pub fd: Vec<Vec<Pattern>>,
    pub stats: MineStats,
}

impl MiningResult {
    pub fn patterns(&self) -> impl Iterator<Item = &Pattern> {
        self.fd.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.fd.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Converts every net; errors carry the input position.
pub fn nets_to_netgraphs(nets: &[Net], mode: Parallelism) -> Result<Vec<NetGraph>, MineError> {
    map_slice(nets, mode, net_to_netgraph)
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.map_err(|source| MineError::Input { index, source }))
        .collect()
}

/// Frequent edge identifications with the code units carrying them.
#[derive(Debug, Clone, Default)]
pub struct Fdfs {
    /// Retained units, sorted by identification then graph id.
    pub units: Vec<DfsCodeUnit>,
    pub support: BTreeMap<EdgeIdentification, usize>,
}

/// Frequent node renderings and their supporting graph ids.
#[derive(Debug, Clone, Default)]
pub struct Snng {
    pub nodes: BTreeMap<NodeRendering, Vec<String>>,
}

#[derive(Debug, Clone, Default)]
pub struct Filtered {
    pub fdfs: Fdfs,
    /// Retained forward units (rear order greater than front order), sorted
    /// by the unit order.
    pub min_fdfs: Vec<DfsCodeUnit>,
    pub snng: Snng,
}

/// Minimal codes of every multi-node component; when the tie search hits its
/// guard a greedy traversal is used instead, which yields the same units up
/// to order and direction.
fn component_codes(g: &RankedGraph, limits: CanonLimits) -> Vec<RCode> {
    let mut comp = vec![u32::MAX; g.len()];
    let mut out = Vec::new();
    for s in 0..g.len() {
        if comp[s] != u32::MAX {
            continue;
        }
        let mut members = vec![s as u32];
        comp[s] = s as u32;
        let mut k = 0;
        while k < members.len() {
            for &(w, _, _) in &g.adj[members[k] as usize] {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = s as u32;
                    members.push(w);
                }
            }
            k += 1;
        }
        if members.len() < 2 {
            continue;
        }
        members.sort_unstable();
        let pos: HashMap<u32, u32> = members.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        let ranks = members.iter().map(|&m| g.node_rank[m as usize]).collect();
        let mut edges = Vec::new();
        for &m in &members {
            for &(w, e, _) in &g.adj[m as usize] {
                if m < w {
                    let back = g.edge_between(w, m).expect("symmetric");
                    edges.push((pos[&m], pos[&w], e, back));
                }
            }
        }
        let sub = RankedGraph::from_parts(ranks, &edges);
        let code = match min_code(&sub, limits) {
            Ok((c, _)) => c,
            Err(DfsError::SizeGuardExceeded { .. }) => greedy_code(&sub).expect("connected").0,
            Err(e) => unreachable!("component is connected: {e}"),
        };
        out.push(code);
    }
    out
}

/// Encodes every graph, pools the code units by edge identification and
/// keeps those (and the node renderings) present in at least `minsup`
/// distinct graphs.
pub fn build_and_filter(ngs: &[NetGraph], minsup: usize) -> Result<Filtered, MineError> {
    build_and_filter_with(ngs, minsup, CanonLimits::default(), Parallelism::default())
}

pub fn build_and_filter_with(
    ngs: &[NetGraph],
    minsup: usize,
    limits: CanonLimits,
    mode: Parallelism,
) -> Result<Filtered, MineError> {
    if minsup == 0 {
        return Err(MineError::ZeroMinsup);
    }
    if ngs.is_empty() {
        return Err(MineError::EmptyInput);
    }
    let alpha = Alphabet::build(ngs);
    let units: Vec<Vec<DfsCodeUnit>> = map_slice(ngs, mode, |ng| {
        let g = RankedGraph::new(ng, &alpha);
        component_codes(&g, limits)
            .iter()
            .flat_map(|c| render_code(c, &alpha, Some(&ng.id)).0)
            .collect()
    });
    let mut pool: Vec<(EdgeIdentification, usize, DfsCodeUnit)> = units
        .into_iter()
        .enumerate()
        .flat_map(|(gi, us)| us.into_iter().map(move |u| (u.identification(), gi, u)))
        .collect();
    pool.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));

    let mut support: BTreeMap<EdgeIdentification, usize> = BTreeMap::new();
    let mut i = 0;
    while i < pool.len() {
        let mut j = i;
        let mut graphs = 0;
        let mut last = usize::MAX;
        while j < pool.len() && pool[j].0 == pool[i].0 {
            if pool[j].1 != last {
                graphs += 1;
                last = pool[j].1;
            }
            j += 1;
        }
        if graphs >= minsup {
            support.insert(pool[i].0.clone(), graphs);
        }
        i = j;
    }
    let kept: Vec<DfsCodeUnit> = pool
        .into_iter()
        .filter(|(id, _, _)| support.contains_key(id))
        .map(|(_, _, u)| u)
        .collect();
    let mut min_fdfs: Vec<DfsCodeUnit> = kept.iter().filter(|u| u.rear_order > u.front_order).cloned().collect();
    min_fdfs.sort();
    min_fdfs.dedup();

    let mut nodes: BTreeMap<NodeRendering, Vec<String>> = BTreeMap::new();
    for ng in ngs {
        let mut seen = HashSet::new();
        for k in 0..ng.nodes.len() {
            let r = ng.node_rendering(k);
            if seen.insert(r.clone()) {
                nodes.entry(r).or_default().push(ng.id.clone());
            }
        }
    }
    nodes.retain(|_, v| v.len() >= minsup);
    Ok(Filtered {
        fdfs: Fdfs { units: kept, support },
        min_fdfs,
        snng: Snng { nodes },
    })
}

/// Mines every connected complete subnet pattern with support at least
/// `cfg.minsup`.
pub fn mine(ngs: &[NetGraph], cfg: &MinerConfig) -> Result<MiningResult, MineError> {
    if cfg.minsup == 0 {
        return Err(MineError::ZeroMinsup);
    }
    if ngs.is_empty() {
        return Err(MineError::EmptyInput);
    }
    let alpha = Alphabet::build(ngs);
    let graphs: Vec<RankedGraph> = map_slice(ngs, cfg.parallelism, |ng| RankedGraph::new(ng, &alpha));

    // Node renderings: occurrences and distinct-graph support.
    let mut occ: Vec<Vec<(u32, u32)>> = vec![Vec::new(); alpha.nodes.len()];
    for (gi, g) in graphs.iter().enumerate() {
        for (x, &r) in g.node_rank.iter().enumerate() {
            occ[r as usize].push((gi as u32, x as u32));
        }
    }
    let graph_count = |o: &[(u32, u32)]| {
        let mut n = 0;
        let mut last = u32::MAX;
        for &(g, _) in o {
            if g != last {
                n += 1;
                last = g;
            }
        }
        n
    };
    let node_ok: Vec<bool> = occ.iter().map(|o| graph_count(o) >= cfg.minsup).collect();

    // Edge identifications, counted once per graph.
    let mut edge_seen: HashMap<(u32, u32, u32), (u32, usize)> = HashMap::new();
    for (gi, g) in graphs.iter().enumerate() {
        for (x, adj) in g.adj.iter().enumerate() {
            for &(w, e, _) in adj {
                if (x as u32) < w {
                    let f = g.edge_between(w, x as u32).expect("symmetric");
                    let key = ident(g.node_rank[x], e, f, g.node_rank[w as usize]);
                    let slot = edge_seen.entry(key).or_insert((u32::MAX, 0));
                    if slot.0 != gi as u32 {
                        *slot = (gi as u32, slot.1 + 1);
                    }
                }
            }
        }
    }
    let edge_ok: HashSet<(u32, u32, u32)> = edge_seen
        .into_iter()
        .filter(|(_, (_, n))| *n >= cfg.minsup)
        .map(|(k, _)| k)
        .collect();

    let space = Space {
        graphs: &graphs,
        node_ok: &node_ok,
        edge_ok: &edge_ok,
        cfg,
    };
    let seeds: Vec<u32> = (0..alpha.nodes.len() as u32).filter(|&r| node_ok[r as usize]).collect();
    let grown = map_slice(&seeds, cfg.parallelism, |&r| {
        grow_subtree(&space, seed(&space, r, &occ[r as usize]))
    });

    let mut stats = MineStats::default();
    let mut found = Vec::new();
    for g in grown {
        let (f, s) = g?;
        stats.embeddings_peak = stats.embeddings_peak.max(s.embeddings_peak);
        stats.lazy_patterns += s.lazy_patterns;
        stats.rejected_children += s.rejected_children;
        found.extend(f);
    }
    found.sort_by(|a, b| (a.edges.len(), &a.code).cmp(&(b.edges.len(), &b.code)));
    stats.patterns = found.len();

    let mut fd: Vec<Vec<Pattern>> = Vec::new();
    for f in found {
        let j = f.edges.len();
        if fd.len() <= j {
            fd.resize_with(j + 1, Vec::new);
        }
        let code = if j == 0 {
            PatternCode::Node(alpha.node(f.code.root).clone())
        } else {
            PatternCode::Code(render_code(&f.code, &alpha, None))
        };
        fd[j].push(Pattern {
            code,
            nodes: f.ranks.len(),
            support: f.supporters.len(),
            supporters: f.supporters.iter().map(|&g| ngs[g as usize].id.clone()).collect(),
        });
    }
    Ok(MiningResult {
        minsup: cfg.minsup,
        inputs: ngs.len(),
        fd,
        stats,
    })
}
