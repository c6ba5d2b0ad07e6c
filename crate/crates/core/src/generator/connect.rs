use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::petri::{Capacity, Net};
use crate::Label;

use super::GenError;

/// Which side's label (and capacity) a merged condition keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeLabels {
    KeepFirst,
    KeepSecond,
}

const RANDOM_TRIES: usize = 32;

/// Glues `n2` onto `n1` by merging between 1 and `min(|C1|, |C2|)` condition
/// pairs, each pair drawn without replacement on both sides.
///
/// A pair is skipped when the merged label would give some event two
/// conditions with the same label. Merging stops early when no pair is left;
/// if not even the first pair can be merged the result is
/// [`GenError::NoValidMerge`]. Node ids of `n2` that clash with `n1` are
/// prefixed with `"{n2.id}:"`.
pub fn connect<R: Rng>(n1: &Net, n2: &Net, rng: &mut R) -> Result<Net, GenError> {
    connect_with(n1, n2, rng, MergeLabels::KeepFirst, &HashSet::new())
}

/// [`connect`] with a label policy and a set of `n1` condition ids that must
/// not take part in a merge.
pub fn connect_with<R: Rng>(
    n1: &Net,
    n2: &Net,
    rng: &mut R,
    policy: MergeLabels,
    protected: &HashSet<String>,
) -> Result<Net, GenError> {
    if n1.conditions.is_empty() || n2.conditions.is_empty() {
        return Err(GenError::NoConditions);
    }
    let n2 = disjoint_ids(n1, n2);
    let left: Vec<usize> = (0..n1.conditions.len())
        .filter(|&i| !protected.contains(&n1.conditions[i].id))
        .collect();
    if left.is_empty() {
        return Err(GenError::NoConditions);
    }
    let nxc = rng.gen_range(1..=left.len().min(n2.conditions.len()));

    let mut st = State::new(n1, &n2);
    let mut free1 = left;
    let mut free2: Vec<usize> = (0..n2.conditions.len()).collect();
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for step in 0..nxc {
        let pick = |st: &State, i: usize, j: usize| {
            let (c1, c2) = (&n1.conditions[i].id, &n2.conditions[j].id);
            let lab = match policy {
                MergeLabels::KeepFirst => &n1.conditions[i].label,
                MergeLabels::KeepSecond => &n2.conditions[j].label,
            };
            st.can_merge(c1, c2, lab)
        };
        let mut choice = None;
        for _ in 0..RANDOM_TRIES {
            let a = rng.gen_range(0..free1.len());
            let b = rng.gen_range(0..free2.len());
            if pick(&st, free1[a], free2[b]) {
                choice = Some((a, b));
                break;
            }
        }
        if choice.is_none() {
            let valid: Vec<(usize, usize)> = (0..free1.len())
                .flat_map(|a| (0..free2.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| pick(&st, free1[a], free2[b]))
                .collect();
            choice = valid.choose(rng).copied();
        }
        let Some((a, b)) = choice else {
            if step == 0 {
                return Err(GenError::NoValidMerge);
            }
            break;
        };
        let (i, j) = (free1.swap_remove(a), free2.swap_remove(b));
        let lab = match policy {
            MergeLabels::KeepFirst => n1.conditions[i].label.clone(),
            MergeLabels::KeepSecond => n2.conditions[j].label.clone(),
        };
        st.merge(&n1.conditions[i].id, &n2.conditions[j].id, lab);
        merged.push((i, j));
        if free1.is_empty() || free2.is_empty() {
            break;
        }
    }
    Ok(assemble(n1, &n2, &merged, policy))
}

/// Copy of `n2` whose node ids avoid those of `n1`: unchanged when already
/// disjoint, else prefixed with `"{n2.id}:"` (or `"{n2.id}.k:"` if that
/// still clashes).
fn disjoint_ids(n1: &Net, n2: &Net) -> Net {
    let taken: HashSet<&str> = n1
        .conditions
        .iter()
        .map(|c| c.id.as_str())
        .chain(n1.events.iter().map(|e| e.id.as_str()))
        .collect();
    let clashes = |prefix: &str| {
        n2.conditions
            .iter()
            .map(|c| &c.id)
            .chain(n2.events.iter().map(|e| &e.id))
            .any(|id| taken.contains(format!("{prefix}{id}").as_str()))
    };
    if !clashes("") {
        return n2.clone();
    }
    let mut prefix = format!("{}:", n2.id);
    let mut k = 1;
    while clashes(&prefix) {
        prefix = format!("{}.{k}:", n2.id);
        k += 1;
    }
    prefix_ids(n2, &prefix)
}

/// Copy of `net` with every node id prefixed.
pub fn prefix_ids(net: &Net, prefix: &str) -> Net {
    let mut out = net.clone();
    let p = |id: &str| format!("{prefix}{id}");
    for c in &mut out.conditions {
        c.id = p(&c.id);
    }
    for e in &mut out.events {
        e.id = p(&e.id);
    }
    for a in &mut out.arcs {
        a.from = p(&a.from);
        a.to = p(&a.to);
    }
    out.capacities = net.capacities.iter().map(|(k, v)| (p(k), *v)).collect();
    out
}

struct State {
    label: HashMap<String, Label>,
    ev_conds: HashMap<String, Vec<String>>,
    cond_evs: HashMap<String, Vec<String>>,
}

impl State {
    fn new(n1: &Net, n2: &Net) -> Self {
        let mut label = HashMap::new();
        let mut ev_conds: HashMap<String, Vec<String>> = HashMap::new();
        let mut cond_evs: HashMap<String, Vec<String>> = HashMap::new();
        for n in [n1, n2] {
            let conds: HashSet<&str> = n.conditions.iter().map(|c| c.id.as_str()).collect();
            for c in &n.conditions {
                label.insert(c.id.clone(), c.label.clone());
            }
            for a in &n.arcs {
                let (c, e) = if conds.contains(a.from.as_str()) {
                    (&a.from, &a.to)
                } else {
                    (&a.to, &a.from)
                };
                ev_conds.entry(e.clone()).or_default().push(c.clone());
                cond_evs.entry(c.clone()).or_default().push(e.clone());
            }
        }
        State {
            label,
            ev_conds,
            cond_evs,
        }
    }

    fn can_merge(&self, c1: &str, c2: &str, lab: &Label) -> bool {
        let empty = Vec::new();
        let evs = self
            .cond_evs
            .get(c1)
            .unwrap_or(&empty)
            .iter()
            .chain(self.cond_evs.get(c2).unwrap_or(&empty));
        for e in evs {
            for c in &self.ev_conds[e] {
                if c != c1 && c != c2 && &self.label[c] == lab {
                    return false;
                }
            }
        }
        true
    }

    fn merge(&mut self, c1: &str, c2: &str, lab: Label) {
        self.label.insert(c1.to_string(), lab);
        let moved = self.cond_evs.remove(c2).unwrap_or_default();
        for e in &moved {
            for c in self.ev_conds.get_mut(e).expect("event known") {
                if c == c2 {
                    *c = c1.to_string();
                }
            }
        }
        self.cond_evs.entry(c1.to_string()).or_default().extend(moved);
    }
}

fn assemble(n1: &Net, n2: &Net, merged: &[(usize, usize)], policy: MergeLabels) -> Net {
    let mut out = n1.clone();
    let mut rename: HashMap<&str, &str> = HashMap::new();
    for &(i, j) in merged {
        let (c1, c2) = (&n1.conditions[i], &n2.conditions[j]);
        rename.insert(&c2.id, &c1.id);
        if policy == MergeLabels::KeepSecond {
            out.conditions[i].label = c2.label.clone();
            match n2.capacity_of(&c2.id) {
                Capacity::Infinite => out.capacities.remove(&c1.id),
                k => out.capacities.insert(c1.id.clone(), k),
            };
        }
    }
    for c in &n2.conditions {
        if !rename.contains_key(c.id.as_str()) {
            out.conditions.push(c.clone());
            if let Some(k) = n2.capacities.get(&c.id) {
                out.capacities.insert(c.id.clone(), *k);
            }
        }
    }
    out.events.extend(n2.events.iter().cloned());
    for a in &n2.arcs {
        let mut a = a.clone();
        if let Some(&to) = rename.get(a.from.as_str()) {
            a.from = to.to_string();
        }
        if let Some(&to) = rename.get(a.to.as_str()) {
            a.to = to.to_string();
        }
        out.arcs.push(a);
    }
    out
}
