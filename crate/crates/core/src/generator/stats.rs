use serde::{Deserialize, Serialize};

use crate::netgraph::{net_to_netgraph, NetGraphError};
use crate::par::{map_slice, Parallelism};
use crate::petri::Net;

use super::{generate_reservoir_with, GenError, GeneratorConfig};

/// Average arcs per net (ARN), average net graph edges per net (AEN) and
/// their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReservoirStats {
    pub nets: usize,
    pub arn: f64,
    pub aen: f64,
    pub ratio: f64,
}

pub fn reservoir_stats(nets: &[Net], mode: Parallelism) -> Result<ReservoirStats, NetGraphError> {
    let edges = map_slice(nets, mode, |n| net_to_netgraph(n).map(|g| g.edges.len()))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let count = nets.len().max(1) as f64;
    let arn = nets.iter().map(|n| n.arcs.len()).sum::<usize>() as f64 / count;
    let aen = edges.iter().sum::<usize>() as f64 / count;
    Ok(ReservoirStats {
        nets: nets.len(),
        arn,
        aen,
        ratio: if arn > 0.0 { aen / arn } else { 0.0 },
    })
}

/// Generator settings aiming at `target` arcs per net: `U = round(A^0.4)`
/// events of `H = round(A / U)` conditions each, both fixed, with a
/// condition pool of `max(26, 4H)` labels.
pub fn compression_preset(target: usize, amount: usize, seed: u64) -> GeneratorConfig {
    let a = target.max(1) as f64;
    let u = (a.powf(0.4).round() as usize).max(1);
    let h = ((a / u as f64).round() as usize).max(1);
    GeneratorConfig {
        amount,
        max_units: u,
        max_conds: h,
        random_units: false,
        random_conds: false,
        event_pool: 26,
        cond_pool: (4 * h).max(26),
        seed,
    }
}

/// Statistics of one preset reservoir per target.
pub fn compression_sweep(
    targets: &[usize],
    amount: usize,
    seed: u64,
    mode: Parallelism,
) -> Result<Vec<(usize, ReservoirStats)>, GenError> {
    targets
        .iter()
        .map(|&t| {
            let nets = generate_reservoir_with(&compression_preset(t, amount, seed), mode)?;
            Ok((t, reservoir_stats(&nets, mode)?))
        })
        .collect()
}
