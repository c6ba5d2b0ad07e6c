use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::miner::{pattern_to_net, MineError, MiningResult, ResultsJson};
use crate::petri::{invariant_key, labeled_isomorphic, Net, NetError};

use super::{chain, connect_with, prefix_ids, stream_rng, GenError, MergeLabels, UnitShape};

/// Rejection draws allowed per planting net before giving up.
const PLANTING_DRAWS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantingConfig {
    /// Number of planting nets.
    pub n: usize,
    /// Upper bound on events per planting net.
    pub max_events: usize,
    /// Upper bound on arcs per event.
    pub max_conds: usize,
    pub minsup: usize,
    pub seed: u64,
    /// Accepted total node count (events plus conditions), inclusive.
    pub nodes: (usize, usize),
    /// Accepted arc count, inclusive.
    pub arcs: (usize, usize),
    pub event_pool: usize,
    pub cond_pool: usize,
}

impl Default for PlantingConfig {
    fn default() -> Self {
        PlantingConfig {
            n: 10,
            max_events: 6,
            max_conds: 8,
            minsup: 500,
            seed: 0,
            nodes: (9, 15),
            arcs: (10, 19),
            event_pool: 26,
            cond_pool: 26,
        }
    }
}

impl PlantingConfig {
    fn check(&self, reservoir: usize) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::ConfigInvalid(m));
        if self.n == 0 || self.max_events == 0 || self.max_conds == 0 {
            return bad("planting counts must be positive".into());
        }
        if reservoir == 0 {
            return bad("reservoir is empty".into());
        }
        if self.minsup >= reservoir {
            return bad(format!("minsup {} must be below the reservoir size {reservoir}", self.minsup));
        }
        if self.max_conds > self.cond_pool || self.event_pool == 0 {
            return bad("label pools too small".into());
        }
        if self.nodes.0 > self.nodes.1 || self.arcs.0 > self.arcs.1 {
            return bad("empty size range".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementRow {
    pub planting_id: String,
    pub m: usize,
    pub targets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantingLedger {
    pub planting_nets: Vec<Net>,
    pub placements: Vec<PlacementRow>,
    pub seed: u64,
    pub config: PlantingConfig,
}

/// Draws planting net `k`: chained units, redrawn until the node and arc
/// counts fall in range.
fn planting_net<R: Rng>(cfg: &PlantingConfig, k: usize, rng: &mut R) -> Result<Net, GenError> {
    let shape = UnitShape {
        max_conds: cfg.max_conds,
        random_conds: true,
        event_pool: cfg.event_pool,
        cond_pool: cfg.cond_pool,
    };
    let id = format!("x{k}");
    for _ in 0..PLANTING_DRAWS {
        let units = rng.gen_range(1..=cfg.max_events);
        let net = chain(&shape, units, rng, &id)?;
        let nodes = net.events.len() + net.conditions.len();
        let arcs = net.arcs.len();
        if (cfg.nodes.0..=cfg.nodes.1).contains(&nodes) && (cfg.arcs.0..=cfg.arcs.1).contains(&arcs) {
            return Ok(prefix_ids(&net, &format!("{id}:")));
        }
    }
    Err(GenError::ConfigInvalid(format!(
        "no planting net within {:?} nodes and {:?} arcs after {PLANTING_DRAWS} draws",
        cfg.nodes, cfg.arcs
    )))
}

/// Plants `cfg.n` random nets into the reservoir; see [`plant_with`].
pub fn plant(reservoir: &[Net], cfg: &PlantingConfig) -> Result<(Vec<Net>, PlantingLedger), GenError> {
    let mut rng = stream_rng(cfg.seed, u64::MAX);
    let nets = (0..cfg.n)
        .map(|k| planting_net(cfg, k, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    plant_with(reservoir, cfg, nets)
}

/// Plants the given nets. Each net `x` goes into `m(x)` distinct test nets,
/// `m(x)` uniform in `minsup+1..=N`. A target `y` becomes
/// `connect(y, x)` with merged conditions keeping `x`'s labels, so `x`
/// stays a complete subnet of the result; conditions of nets planted
/// earlier are never merged again.
pub fn plant_with(
    reservoir: &[Net],
    cfg: &PlantingConfig,
    planting_nets: Vec<Net>,
) -> Result<(Vec<Net>, PlantingLedger), GenError> {
    cfg.check(reservoir.len())?;
    let total = reservoir.len();
    let mut out = reservoir.to_vec();
    let mut protected: Vec<HashSet<String>> = vec![HashSet::new(); total];
    let mut placements = Vec::with_capacity(planting_nets.len());
    for (k, x) in planting_nets.iter().enumerate() {
        let mut rng = stream_rng(cfg.seed, k as u64);
        let m = rng.gen_range(cfg.minsup + 1..=total);
        let mut targets = sample(&mut rng, total, m).into_vec();
        targets.sort_unstable();
        for &t in &targets {
            let y = &out[t];
            let merged = match connect_with(y, x, &mut rng, MergeLabels::KeepSecond, &protected[t]) {
                Ok(n) => n,
                Err(GenError::NoValidMerge | GenError::NoConditions) => disjoint_union(y, x),
                Err(e) => return Err(e),
            };
            let x_events: HashSet<&str> = x.events.iter().map(|e| e.id.as_str()).collect();
            for a in &merged.arcs {
                if x_events.contains(a.from.as_str()) {
                    protected[t].insert(a.to.clone());
                } else if x_events.contains(a.to.as_str()) {
                    protected[t].insert(a.from.clone());
                }
            }
            out[t] = merged;
        }
        placements.push(PlacementRow {
            planting_id: x.id.clone(),
            m,
            targets: targets.iter().map(|&t| out[t].id.clone()).collect(),
        });
    }
    Ok((
        out,
        PlantingLedger {
            planting_nets,
            placements,
            seed: cfg.seed,
            config: cfg.clone(),
        },
    ))
}

fn disjoint_union(y: &Net, x: &Net) -> Net {
    let mut out = y.clone();
    out.conditions.extend(x.conditions.iter().cloned());
    out.events.extend(x.events.iter().cloned());
    out.arcs.extend(x.arcs.iter().cloned());
    out.capacities.extend(x.capacities.iter().map(|(k, v)| (k.clone(), *v)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub planting_id: String,
    pub events: usize,
    pub nodes: usize,
    pub arcs: usize,
    pub planted: usize,
    pub found: bool,
    pub mined: usize,
    pub ratio: f64,
    /// Mined more often than planted (extra copies arose by chance).
    pub extra: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantingReport {
    pub rows: Vec<ReportRow>,
    pub pass: bool,
}

/// Looks up each planting net among the mined patterns (by labeled
/// isomorphism) and compares its support with the planted count.
pub fn planting_report(result: &MiningResult, ledger: &PlantingLedger) -> Result<PlantingReport, MineError> {
    let sizes: HashSet<usize> = ledger.planting_nets.iter().map(|x| x.events.len()).collect();
    let mut found = Vec::new();
    for (k, p) in result.patterns().enumerate() {
        if sizes.contains(&p.nodes) {
            found.push((pattern_to_net(p, &format!("p{k}"))?, p.support));
        }
    }
    report_rows(found, ledger).map_err(|e| MineError::NetGraph(e.into()))
}

/// [`planting_report`] over a written results file.
pub fn planting_report_json(results: &ResultsJson, ledger: &PlantingLedger) -> Result<PlantingReport, NetError> {
    let sizes: HashSet<usize> = ledger.planting_nets.iter().map(|x| x.events.len()).collect();
    let found = results
        .patterns
        .iter()
        .filter(|p| sizes.contains(&p.net.events.len()))
        .map(|p| (p.net.clone(), p.support))
        .collect();
    report_rows(found, ledger)
}

fn report_rows(found: Vec<(Net, usize)>, ledger: &PlantingLedger) -> Result<PlantingReport, NetError> {
    let mut by_key: HashMap<String, Vec<(Net, usize)>> = HashMap::new();
    for (net, support) in found {
        by_key.entry(invariant_key(&net)?).or_default().push((net, support));
    }
    let mut rows = Vec::new();
    for row in &ledger.placements {
        let x = ledger
            .planting_nets
            .iter()
            .find(|x| x.id == row.planting_id)
            .expect("ledger placement names a planting net");
        let key = invariant_key(x)?;
        let mut mined = None;
        for (net, support) in by_key.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
            if labeled_isomorphic(net, x)? {
                mined = Some(*support);
                break;
            }
        }
        let planted = row.m;
        let m = mined.unwrap_or(0);
        rows.push(ReportRow {
            planting_id: row.planting_id.clone(),
            events: x.events.len(),
            nodes: x.events.len() + x.conditions.len(),
            arcs: x.arcs.len(),
            planted,
            found: mined.is_some(),
            mined: m,
            ratio: if planted == 0 { 0.0 } else { m as f64 / planted as f64 },
            extra: m > planted,
        });
    }
    let pass = rows.iter().all(|r| r.found && r.ratio >= 1.0);
    Ok(PlantingReport { rows, pass })
}
