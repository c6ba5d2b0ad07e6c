//! Exhaustive reference miner for small nets.
//!
//! Works on nets directly: event subsets are enumerated by bitmask, closed
//! into complete subnets, and grouped by labeled isomorphism. Nothing here
//! goes through net graphs or DFS codes, so it can check the miner.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::par::{map_slice, Parallelism};
use crate::petri::{closure_by_position, invariant_key, labeled_isomorphic, Net, NetError, NetIndex};

/// Largest net (in events) the oracle accepts.
pub const ORACLE_EVENT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("net {id:?} has {found} events; the oracle accepts at most {limit}")]
    SizeGuardExceeded { id: String, found: usize, limit: usize },
    #[error("net {0:?} is not pure")]
    NotPure(String),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Event adjacency: two events are adjacent when they share a condition.
fn event_neighbors(ix: &NetIndex<'_>) -> Vec<u32> {
    let net = ix.net;
    let mut nb = vec![0u32; net.events.len()];
    for c in 0..net.conditions.len() {
        let evs: Vec<usize> = ix.cond_in[c]
            .iter()
            .chain(&ix.cond_out[c])
            .map(|&a| ix.arc_event(a))
            .collect();
        for &x in &evs {
            for &y in &evs {
                if x != y {
                    nb[x] |= 1 << y;
                }
            }
        }
    }
    nb
}

fn connected(mask: u32, nb: &[u32]) -> bool {
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = nb[x] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == mask
}

/// Pushes `net` unless an isomorphic copy is already present.
fn insert_class(classes: &mut Vec<(String, Net)>, by_key: &mut HashMap<String, Vec<usize>>, net: Net) -> Result<Option<usize>, NetError> {
    let key = invariant_key(&net)?;
    let slot = by_key.entry(key.clone()).or_default();
    for &k in slot.iter() {
        if labeled_isomorphic(&classes[k].1, &net)? {
            return Ok(Some(k));
        }
    }
    slot.push(classes.len());
    classes.push((key, net));
    Ok(None)
}

/// One complete subnet per connected event subset of size `1..=max_events`,
/// with isomorphic duplicates removed. Results keep the net's id.
pub fn enumerate_connected_complete_subnets(net: &Net, max_events: usize) -> Result<Vec<Net>, OracleError> {
    let n = net.events.len();
    if n > ORACLE_EVENT_LIMIT {
        return Err(OracleError::SizeGuardExceeded {
            id: net.id.clone(),
            found: n,
            limit: ORACLE_EVENT_LIMIT,
        });
    }
    let ix = NetIndex::new(net)?;
    if !ix.is_pure() {
        return Err(OracleError::NotPure(net.id.clone()));
    }
    let nb = event_neighbors(&ix);
    let mut classes = Vec::new();
    let mut by_key = HashMap::new();
    let mut chosen = vec![false; n];
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() as usize > max_events || !connected(mask, &nb) {
            continue;
        }
        for (i, c) in chosen.iter_mut().enumerate() {
            *c = mask & (1 << i) != 0;
        }
        insert_class(&mut classes, &mut by_key, closure_by_position(&ix, &chosen))?;
    }
    Ok(classes.into_iter().map(|(_, net)| net).collect())
}

/// An isomorphism class of complete subnets and the inputs containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleClass {
    pub net: Net,
    pub support: usize,
    pub supporters: Vec<String>,
}

/// Every class of connected complete subnets (up to `max_events` events)
/// present in at least `minsup` distinct inputs, sorted by size then by
/// invariant key.
pub fn brute_force_mine(nets: &[Net], minsup: usize, max_events: usize) -> Result<Vec<OracleClass>, OracleError> {
    brute_force_mine_with(nets, minsup, max_events, Parallelism::default())
}

pub fn brute_force_mine_with(
    nets: &[Net],
    minsup: usize,
    max_events: usize,
    mode: Parallelism,
) -> Result<Vec<OracleClass>, OracleError> {
    let per_net = map_slice(nets, mode, |n| enumerate_connected_complete_subnets(n, max_events))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut classes: Vec<(String, Net)> = Vec::new();
    let mut by_key = HashMap::new();
    let mut supporters: Vec<Vec<String>> = Vec::new();
    for (net, subs) in nets.iter().zip(per_net) {
        for sub in subs {
            let k = match insert_class(&mut classes, &mut by_key, sub)? {
                Some(k) => k,
                None => {
                    supporters.push(Vec::new());
                    classes.len() - 1
                }
            };
            // Subnets of one net are pairwise non-isomorphic, so each
            // class gains at most one supporter per net.
            supporters[k].push(net.id.clone());
        }
    }
    let mut out: Vec<(String, OracleClass)> = classes
        .into_iter()
        .zip(supporters)
        .filter(|(_, s)| s.len() >= minsup.max(1))
        .map(|((key, net), s)| {
            (
                key,
                OracleClass {
                    net,
                    support: s.len(),
                    supporters: s,
                },
            )
        })
        .collect();
    out.sort_by(|a, b| (a.1.net.events.len(), &a.0).cmp(&(b.1.net.events.len(), &b.0)));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

/// One side's class as listed in a diff.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub net: Net,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportMismatch {
    pub net: Net,
    pub pspan: usize,
    pub oracle: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    /// Oracle classes with no isomorphic miner output.
    pub missing: Vec<DiffEntry>,
    /// Miner output with no isomorphic oracle class.
    pub extra: Vec<DiffEntry>,
    pub support_mismatch: Vec<SupportMismatch>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.support_mismatch.is_empty()
    }
}

/// Matches the two result sets class by class under labeled isomorphism.
pub fn diff_results(pspan: &[(Net, usize)], oracle: &[(Net, usize)]) -> Result<DiffReport, NetError> {
    let mut by_key: HashMap<String, Vec<usize>> = HashMap::new();
    for (k, (net, _)) in oracle.iter().enumerate() {
        by_key.entry(invariant_key(net)?).or_default().push(k);
    }
    let mut matched = vec![false; oracle.len()];
    let mut report = DiffReport::default();
    for (net, support) in pspan {
        let mut hit = None;
        for &k in by_key.get(&invariant_key(net)?).map(Vec::as_slice).unwrap_or(&[]) {
            if !matched[k] && labeled_isomorphic(net, &oracle[k].0)? {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                matched[k] = true;
                if oracle[k].1 != *support {
                    report.support_mismatch.push(SupportMismatch {
                        net: net.clone(),
                        pspan: *support,
                        oracle: oracle[k].1,
                    });
                }
            }
            None => report.extra.push(DiffEntry {
                net: net.clone(),
                support: *support,
            }),
        }
    }
    for (k, (net, support)) in oracle.iter().enumerate() {
        if !matched[k] {
            report.missing.push(DiffEntry {
                net: net.clone(),
                support: *support,
            });
        }
    }
    Ok(report)
}
