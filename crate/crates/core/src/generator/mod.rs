//! Seeded random pure C/E nets and planting experiments.
//!
//! Every net is built from 1-complete units (one event with its conditions)
//! glued together by [`connect`]. Net `i` of a reservoir draws from its own
//! ChaCha8 stream (`seed`, stream `i`), so output is identical regardless of
//! thread count.

mod connect;
mod planting;
mod stats;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::label::pool_name;
use crate::par::{map_range, Parallelism};
use crate::petri::Net;

pub use connect::{connect, connect_with, prefix_ids, MergeLabels};
pub use planting::{
    plant, plant_with, planting_report, planting_report_json, PlacementRow, PlantingConfig, PlantingLedger, PlantingReport,
    ReportRow,
};
pub use stats::{compression_preset, compression_sweep, reservoir_stats, ReservoirStats};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("a net without conditions cannot be connected")]
    NoConditions,
    #[error("no condition pair can be merged without a label clash")]
    NoValidMerge,
    #[error(transparent)]
    NetGraph(#[from] crate::netgraph::NetGraphError),
}

/// Attempts to redraw a unit whose first merge is impossible.
const MERGE_ATTEMPTS: usize = 1000;

/// Reservoir parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub amount: usize,
    /// Units (events) per net: exactly this many, or uniform in `1..=` when
    /// `random_units`.
    pub max_units: usize,
    /// Conditions per event: exactly this many, or uniform in `1..=` when
    /// `random_conds`.
    pub max_conds: usize,
    pub random_units: bool,
    pub random_conds: bool,
    pub event_pool: usize,
    pub cond_pool: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            amount: 100,
            max_units: 6,
            max_conds: 8,
            random_units: true,
            random_conds: true,
            event_pool: 26,
            cond_pool: 26,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn check(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::ConfigInvalid(m.into()));
        if self.amount == 0 {
            return bad("amount must be positive");
        }
        if self.max_units == 0 || self.max_conds == 0 {
            return bad("unit and condition bounds must be positive");
        }
        if self.event_pool == 0 || self.cond_pool == 0 {
            return bad("label pools must be nonempty");
        }
        if self.max_conds > self.cond_pool {
            return bad("an event needs distinct condition labels, so max_conds cannot exceed cond_pool");
        }
        Ok(())
    }

    fn shape(&self) -> UnitShape {
        UnitShape {
            max_conds: self.max_conds,
            random_conds: self.random_conds,
            event_pool: self.event_pool,
            cond_pool: self.cond_pool,
        }
    }
}

/// Parameters of a single 1-complete unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitShape {
    pub max_conds: usize,
    pub random_conds: bool,
    pub event_pool: usize,
    pub cond_pool: usize,
}

/// The rng for net `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// One event with `X1` input and `X2` output conditions, `1 <= X1 + X2 <= H`
/// where `H` is `max_conds` or a uniform draw from `1..=max_conds`. Labels
/// within the unit are distinct, so inputs and outputs never coincide.
pub fn gen_one_complete<R: Rng>(shape: &UnitShape, rng: &mut R) -> Net {
    let mut next = 0;
    unit(shape, rng, "u", &mut next)
}

fn unit<R: Rng>(shape: &UnitShape, rng: &mut R, id: &str, next: &mut usize) -> Net {
    let h = if shape.random_conds {
        rng.gen_range(1..=shape.max_conds)
    } else {
        shape.max_conds
    };
    let x1 = rng.gen_range(0..=h);
    let ev_label = pool_name(rng.gen_range(0..shape.event_pool), true);
    let labels = sample(rng, shape.cond_pool, h);
    let mut n = Net::new(id);
    let ev = format!("e{next}");
    *next += 1;
    n.add_event(ev.clone(), &ev_label);
    for (k, l) in labels.iter().enumerate() {
        let c = format!("c{next}");
        *next += 1;
        n.add_condition(c.clone(), &pool_name(l, false));
        if k < x1 {
            n.add_arc(c, ev.clone());
        } else {
            n.add_arc(ev.clone(), c);
        }
    }
    n
}

/// Chains `units` 1-complete units into one connected net.
pub(crate) fn chain<R: Rng>(shape: &UnitShape, units: usize, rng: &mut R, id: &str) -> Result<Net, GenError> {
    let mut next = 0;
    let mut net = unit(shape, rng, id, &mut next);
    for _ in 1..units {
        let mut attempts = 0;
        net = loop {
            let u = unit(shape, rng, id, &mut next);
            match connect(&net, &u, rng) {
                Ok(n) => break n,
                Err(GenError::NoValidMerge) if attempts < MERGE_ATTEMPTS => attempts += 1,
                Err(e) => return Err(e),
            }
        };
    }
    Ok(net)
}

/// Net `index` of the reservoir described by `cfg`.
pub fn generate_net(cfg: &GeneratorConfig, index: usize) -> Result<Net, GenError> {
    let mut rng = stream_rng(cfg.seed, index as u64);
    let units = if cfg.random_units {
        rng.gen_range(1..=cfg.max_units)
    } else {
        cfg.max_units
    };
    chain(&cfg.shape(), units, &mut rng, &format!("n{index}"))
}

pub fn generate_reservoir(cfg: &GeneratorConfig) -> Result<Vec<Net>, GenError> {
    generate_reservoir_with(cfg, Parallelism::default())
}

pub fn generate_reservoir_with(cfg: &GeneratorConfig, mode: Parallelism) -> Result<Vec<Net>, GenError> {
    cfg.check()?;
    map_range(cfg.amount, mode, |i| generate_net(cfg, i)).into_iter().collect()
}

#[cfg(test)]
mod tests;
