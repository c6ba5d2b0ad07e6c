use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::label::Label;

/// Structural problems with a [`Net`], plus lookup failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetError {
    #[error("net {0:?} has no nodes")]
    EmptyNet(String),
    #[error("node id {0:?} is used more than once")]
    DuplicateId(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("arc {from:?} -> {to:?} joins two nodes of the same kind")]
    SameKindArc { from: String, to: String },
    #[error("arc {from:?} -> {to:?} appears twice")]
    DuplicateArc { from: String, to: String },
    #[error("arc {from:?} -> {to:?} has weight 0")]
    ZeroWeight { from: String, to: String },
    #[error("inhibitor arc {from:?} -> {to:?} must run from a condition to an event")]
    InhibitorOutput { from: String, to: String },
    #[error("capacity given for {0:?}, which is not a condition")]
    StrayCapacity(String),
    #[error("condition {0:?} has capacity 0")]
    ZeroCapacity(String),
    #[error("net has {found} events, more than the limit of {limit}")]
    SizeGuardExceeded { found: usize, limit: usize },
}

/// Token capacity of a condition. `Infinite` is the default and sorts after
/// every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Capacity {
    Finite(u32),
    #[default]
    Infinite,
}

impl Capacity {
    pub fn is_infinite(self) -> bool {
        matches!(self, Capacity::Infinite)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(n) => write!(f, "{n}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Capacity::Finite(n) => s.serialize_u32(*n),
            Capacity::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Capacity;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Capacity, E> {
                u32::try_from(v)
                    .map(Capacity::Finite)
                    .map_err(|_| E::custom("capacity out of range"))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Capacity, E> {
                u64::try_from(v)
                    .map_err(|_| E::custom("negative capacity"))
                    .and_then(|v| self.visit_u64(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Capacity, E> {
                match v {
                    "inf" => Ok(Capacity::Infinite),
                    _ => Err(E::custom(format!("unknown capacity {v:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionNode {
    pub id: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventNode {
    pub id: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inhibitor: bool,
}

impl Arc {
    pub fn new(from: impl Into<String>, to: impl Into<String>) -> Self {
        Arc {
            from: from.into(),
            to: to.into(),
            weight: None,
            inhibitor: false,
        }
    }

    /// Weight with the default of 1 applied.
    pub fn effective_weight(&self) -> u32 {
        self.weight.unwrap_or(1)
    }
}

/// A condition/event net `(C, E; F)` with optional place/transition and
/// inhibitor annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Net {
    pub id: String,
    pub conditions: Vec<ConditionNode>,
    pub events: Vec<EventNode>,
    pub arcs: Vec<Arc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub capacities: BTreeMap<String, Capacity>,
}

impl Net {
    pub fn new(id: impl Into<String>) -> Self {
        Net {
            id: id.into(),
            conditions: Vec::new(),
            events: Vec::new(),
            arcs: Vec::new(),
            capacities: BTreeMap::new(),
        }
    }

    /// Adds a condition; the label must satisfy the label alphabet.
    pub fn add_condition(&mut self, id: impl Into<String>, label: &str) -> &mut Self {
        self.conditions.push(ConditionNode {
            id: id.into(),
            label: Label::new(label).expect("valid condition label"),
        });
        self
    }

    pub fn add_event(&mut self, id: impl Into<String>, label: &str) -> &mut Self {
        self.events.push(EventNode {
            id: id.into(),
            label: Label::new(label).expect("valid event label"),
        });
        self
    }

    pub fn add_arc(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        self.arcs.push(Arc::new(from, to));
        self
    }

    pub fn capacity_of(&self, cond_id: &str) -> Capacity {
        self.capacities.get(cond_id).copied().unwrap_or_default()
    }

    /// Structural validation; see [`NetIndex::new`].
    pub fn validate(&self) -> Result<(), NetError> {
        NetIndex::new(self).map(|_| ())
    }

    pub fn has_annotations(&self) -> bool {
        !self.capacities.is_empty() || self.arcs.iter().any(|a| a.weight.is_some() || a.inhibitor)
    }
}

/// Which side of the bipartition a node id belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRef {
    Condition(usize),
    Event(usize),
}

/// Position-indexed adjacency over a validated net. All vectors are indexed by
/// the position of the node in `net.conditions` / `net.events`, and hold arc
/// positions in `net.arcs`.
#[derive(Debug)]
pub struct NetIndex<'a> {
    pub net: &'a Net,
    ids: HashMap<&'a str, NodeRef>,
    /// Arcs into each event (from conditions).
    pub event_in: Vec<Vec<usize>>,
    /// Arcs out of each event (to conditions).
    pub event_out: Vec<Vec<usize>>,
    pub cond_in: Vec<Vec<usize>>,
    pub cond_out: Vec<Vec<usize>>,
    arc_ends: Vec<(NodeRef, NodeRef)>,
}

impl<'a> NetIndex<'a> {
    /// Validates the net: unique ids, nonempty node set, bipartite arcs with
    /// existing endpoints, no duplicate arcs, positive weights and capacities,
    /// inhibitor arcs only from conditions to events.
    pub fn new(net: &'a Net) -> Result<Self, NetError> {
        if net.conditions.is_empty() && net.events.is_empty() {
            return Err(NetError::EmptyNet(net.id.clone()));
        }
        let mut ids = HashMap::with_capacity(net.conditions.len() + net.events.len());
        for (i, c) in net.conditions.iter().enumerate() {
            if ids.insert(c.id.as_str(), NodeRef::Condition(i)).is_some() {
                return Err(NetError::DuplicateId(c.id.clone()));
            }
        }
        for (i, e) in net.events.iter().enumerate() {
            if ids.insert(e.id.as_str(), NodeRef::Event(i)).is_some() {
                return Err(NetError::DuplicateId(e.id.clone()));
            }
        }
        for (id, cap) in &net.capacities {
            match ids.get(id.as_str()) {
                Some(NodeRef::Condition(_)) => {}
                _ => return Err(NetError::StrayCapacity(id.clone())),
            }
            if *cap == Capacity::Finite(0) {
                return Err(NetError::ZeroCapacity(id.clone()));
            }
        }
        let mut event_in = vec![Vec::new(); net.events.len()];
        let mut event_out = vec![Vec::new(); net.events.len()];
        let mut cond_in = vec![Vec::new(); net.conditions.len()];
        let mut cond_out = vec![Vec::new(); net.conditions.len()];
        let mut arc_ends = Vec::with_capacity(net.arcs.len());
        let mut seen = HashSet::with_capacity(net.arcs.len());
        for (k, arc) in net.arcs.iter().enumerate() {
            let from = *ids
                .get(arc.from.as_str())
                .ok_or_else(|| NetError::UnknownNode(arc.from.clone()))?;
            let to = *ids
                .get(arc.to.as_str())
                .ok_or_else(|| NetError::UnknownNode(arc.to.clone()))?;
            if arc.weight == Some(0) {
                return Err(NetError::ZeroWeight {
                    from: arc.from.clone(),
                    to: arc.to.clone(),
                });
            }
            match (from, to) {
                (NodeRef::Condition(c), NodeRef::Event(e)) => {
                    cond_out[c].push(k);
                    event_in[e].push(k);
                }
                (NodeRef::Event(e), NodeRef::Condition(c)) => {
                    if arc.inhibitor {
                        return Err(NetError::InhibitorOutput {
                            from: arc.from.clone(),
                            to: arc.to.clone(),
                        });
                    }
                    event_out[e].push(k);
                    cond_in[c].push(k);
                }
                _ => {
                    return Err(NetError::SameKindArc {
                        from: arc.from.clone(),
                        to: arc.to.clone(),
                    })
                }
            }
            if !seen.insert((arc.from.as_str(), arc.to.as_str())) {
                return Err(NetError::DuplicateArc {
                    from: arc.from.clone(),
                    to: arc.to.clone(),
                });
            }
            arc_ends.push((from, to));
        }
        Ok(NetIndex {
            net,
            ids,
            event_in,
            event_out,
            cond_in,
            cond_out,
            arc_ends,
        })
    }

    pub fn lookup(&self, id: &str) -> Result<NodeRef, NetError> {
        self.ids
            .get(id)
            .copied()
            .ok_or_else(|| NetError::UnknownNode(id.to_string()))
    }

    pub fn arc_ends(&self, arc: usize) -> (NodeRef, NodeRef) {
        self.arc_ends[arc]
    }

    /// Condition position at the far end of an arc touching an event.
    pub fn arc_condition(&self, arc: usize) -> usize {
        match self.arc_ends[arc] {
            (NodeRef::Condition(c), _) | (_, NodeRef::Condition(c)) => c,
            _ => unreachable!("validated arcs are bipartite"),
        }
    }

    pub fn arc_event(&self, arc: usize) -> usize {
        match self.arc_ends[arc] {
            (NodeRef::Event(e), _) | (_, NodeRef::Event(e)) => e,
            _ => unreachable!("validated arcs are bipartite"),
        }
    }

    /// Events adjacent to condition `c`, input side first, without duplicates.
    pub fn condition_events(&self, c: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.cond_out[c]
            .iter()
            .chain(&self.cond_in[c])
            .map(|&a| self.arc_event(a))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Conditions adjacent to event `e`, without duplicates.
    pub fn event_conditions(&self, e: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.event_in[e]
            .iter()
            .chain(&self.event_out[e])
            .map(|&a| self.arc_condition(a))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// True when no pair `(a,b), (b,a)` is present.
    pub fn is_pure(&self) -> bool {
        self.net.events.iter().enumerate().all(|(e, _)| {
            let ins: HashSet<usize> = self.event_in[e].iter().map(|&a| self.arc_condition(a)).collect();
            self.event_out[e]
                .iter()
                .all(|&a| !ins.contains(&self.arc_condition(a)))
        })
    }

    pub fn node_count(&self) -> usize {
        self.net.conditions.len() + self.net.events.len()
    }
}
