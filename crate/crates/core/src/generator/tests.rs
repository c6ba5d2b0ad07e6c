use std::collections::HashSet;

use super::*;
use crate::miner::{mine, nets_to_netgraphs, MinerConfig};
use crate::netgraph::net_to_netgraph;
use crate::petri::{complete_closure, labeled_isomorphic, validate_and_classify};

fn shape(h: usize, random: bool) -> UnitShape {
    UnitShape {
        max_conds: h,
        random_conds: random,
        event_pool: 26,
        cond_pool: 26,
    }
}

fn small_cfg(amount: usize, seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        amount,
        seed,
        ..GeneratorConfig::default()
    }
}

#[test]
fn reservoirs_are_reproducible() {
    let cfg = small_cfg(200, 42);
    let a = generate_reservoir_with(&cfg, Parallelism::Sequential).unwrap();
    let b = generate_reservoir_with(&cfg, Parallelism::Parallel).unwrap();
    assert_eq!(crate::io::reservoir_to_string(&a), crate::io::reservoir_to_string(&b));
    let c = generate_reservoir(&small_cfg(200, 43)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn generated_nets_are_pure_and_connected() {
    let nets = generate_reservoir(&small_cfg(2000, 7)).unwrap();
    for n in &nets {
        let r = validate_and_classify(n).unwrap();
        assert!(r.is_pure && r.is_connected, "{}", n.id);
        net_to_netgraph(n).unwrap();
    }
    let ids: HashSet<&str> = nets.iter().map(|n| n.id.as_str()).collect();
    assert_eq!(ids.len(), nets.len());
}

#[test]
fn fixed_counts_are_exact() {
    let cfg = GeneratorConfig {
        amount: 50,
        max_units: 4,
        max_conds: 5,
        random_units: false,
        random_conds: false,
        ..GeneratorConfig::default()
    };
    for n in generate_reservoir(&cfg).unwrap() {
        assert_eq!(n.events.len(), 4);
        assert_eq!(n.arcs.len(), 20);
    }
}

#[test]
fn single_condition_unit() {
    let mut rng = stream_rng(1, 0);
    for _ in 0..100 {
        let u = gen_one_complete(&shape(1, false), &mut rng);
        assert_eq!((u.events.len(), u.conditions.len(), u.arcs.len()), (1, 1, 1));
    }
}

#[test]
fn unit_bounds_hold() {
    let mut rng = stream_rng(2, 0);
    for _ in 0..1000 {
        let u = gen_one_complete(&shape(8, true), &mut rng);
        let ins: HashSet<&str> = u.arcs.iter().filter(|a| a.to == "e0").map(|a| a.from.as_str()).collect();
        let outs: HashSet<&str> = u.arcs.iter().filter(|a| a.from == "e0").map(|a| a.to.as_str()).collect();
        assert!((1..=8).contains(&(ins.len() + outs.len())));
        assert!(ins.is_disjoint(&outs));
        let labels: HashSet<_> = u.conditions.iter().map(|c| &c.label).collect();
        assert_eq!(labels.len(), u.conditions.len());
    }
}

#[test]
fn connect_single_conditions() {
    let mut rng = stream_rng(3, 0);
    let s = shape(1, false);
    let a = gen_one_complete(&s, &mut rng);
    let mut b = gen_one_complete(&s, &mut rng);
    b.conditions[0].label = a.conditions[0].label.clone();
    b.arcs[0] = if a.arcs[0].from == "e0" {
        crate::petri::Arc::new("c1", "e0")
    } else {
        crate::petri::Arc::new("e0", "c1")
    };
    let n = connect(&a, &b, &mut rng).unwrap();
    assert_eq!((n.events.len(), n.conditions.len(), n.arcs.len()), (2, 1, 2));
    let ng = net_to_netgraph(&n).unwrap();
    assert_eq!(ng.edges.len(), 1);
}

#[test]
fn merged_conditions_keep_first_labels() {
    let mut rng = stream_rng(4, 0);
    for _ in 0..200 {
        let a = gen_one_complete(&shape(5, true), &mut rng);
        let b = gen_one_complete(&shape(5, true), &mut rng);
        let n = connect(&a, &b, &mut rng).unwrap();
        // Every condition of `a` survives under its own id and label.
        for c in &a.conditions {
            assert!(n.conditions.contains(c));
        }
        assert!(n.conditions.len() < a.conditions.len() + b.conditions.len());
    }
}

#[test]
fn connect_keeps_purity() {
    let mut rng = stream_rng(5, 0);
    for _ in 0..10_000 {
        let a = gen_one_complete(&shape(4, true), &mut rng);
        let b = gen_one_complete(&shape(4, true), &mut rng);
        let c = gen_one_complete(&shape(4, true), &mut rng);
        let Ok(ab) = connect(&a, &b, &mut rng) else { continue };
        let Ok(abc) = connect(&ab, &c, &mut rng) else { continue };
        let r = validate_and_classify(&abc).unwrap();
        assert!(r.is_pure && r.is_connected);
        net_to_netgraph(&abc).unwrap();
    }
}

#[test]
fn connect_needs_conditions() {
    let mut rng = stream_rng(6, 0);
    let a = gen_one_complete(&shape(2, false), &mut rng);
    let mut lone = Net::new("lone");
    lone.add_event("z", "Z");
    assert_eq!(connect(&a, &lone, &mut rng).unwrap_err(), GenError::NoConditions);
}

#[test]
fn config_checks() {
    assert!(generate_reservoir(&small_cfg(0, 1)).is_err());
    let cfg = GeneratorConfig {
        max_conds: 30,
        ..small_cfg(1, 1)
    };
    assert!(matches!(generate_reservoir(&cfg), Err(GenError::ConfigInvalid(_))));
}

fn planting_setup(total: usize, minsup: usize) -> (Vec<Net>, Vec<Net>, PlantingLedger) {
    let reservoir = generate_reservoir(&small_cfg(total, 11)).unwrap();
    let pcfg = PlantingConfig {
        n: 3,
        minsup,
        seed: 5,
        ..PlantingConfig::default()
    };
    let (planted, ledger) = plant(&reservoir, &pcfg).unwrap();
    (reservoir, planted, ledger)
}

#[test]
fn planting_nets_respect_size_ranges() {
    let (_, _, ledger) = planting_setup(40, 20);
    assert_eq!(ledger.planting_nets.len(), 3);
    for x in &ledger.planting_nets {
        let nodes = x.events.len() + x.conditions.len();
        assert!((9..=15).contains(&nodes), "{nodes}");
        assert!((10..=19).contains(&x.arcs.len()));
        assert!(validate_and_classify(x).unwrap().is_connected);
    }
    for row in &ledger.placements {
        assert!(row.m > 20 && row.m <= 40);
        assert_eq!(row.targets.len(), row.m);
    }
}

#[test]
fn planted_copies_are_complete_subnets() {
    let (_, planted, ledger) = planting_setup(40, 20);
    for (x, row) in ledger.planting_nets.iter().zip(&ledger.placements) {
        let ids: Vec<&str> = x.events.iter().map(|e| e.id.as_str()).collect();
        for t in &row.targets {
            let y = planted.iter().find(|n| &n.id == t).unwrap();
            let r = validate_and_classify(y).unwrap();
            assert!(r.is_pure);
            let copy = complete_closure(y, &ids).unwrap();
            assert!(labeled_isomorphic(&copy, x).unwrap(), "{} in {}", x.id, t);
        }
    }
}

#[test]
fn forced_range_plants_everything() {
    let (_, planted, ledger) = planting_setup(12, 11);
    for row in &ledger.placements {
        assert_eq!(row.m, 12);
    }
    assert!(planted.iter().all(|n| n.events.iter().any(|e| e.id.starts_with("x0:"))));
}

#[test]
fn planting_is_reproducible() {
    let (_, p1, l1) = planting_setup(30, 10);
    let (_, p2, l2) = planting_setup(30, 10);
    assert_eq!(p1, p2);
    assert_eq!(l1, l2);
}

#[test]
fn planting_recall_small() {
    let (_, planted, ledger) = planting_setup(60, 30);
    let ngs = nets_to_netgraphs(&planted, Parallelism::default()).unwrap();
    let result = mine(&ngs, &MinerConfig::new(30)).unwrap();
    let report = planting_report(&result, &ledger).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert!(report.pass, "{report:?}");
    for r in &report.rows {
        assert!(r.mined >= r.planted);
    }
    let json = crate::miner::results_json(&result).unwrap();
    assert_eq!(planting_report_json(&json, &ledger).unwrap(), report);
    // Mining above every m(x) recovers nothing.
    let result = mine(&ngs, &MinerConfig::new(61)).unwrap();
    let report = planting_report(&result, &ledger).unwrap();
    assert!(!report.pass && report.rows.iter().all(|r| !r.found));
}

#[test]
fn empty_ledger_passes() {
    let (_, planted, mut ledger) = planting_setup(12, 3);
    ledger.placements.clear();
    let ngs = nets_to_netgraphs(&planted, Parallelism::default()).unwrap();
    let result = mine(&ngs, &MinerConfig::new(12)).unwrap();
    let report = planting_report(&result, &ledger).unwrap();
    assert!(report.pass && report.rows.is_empty());
}

#[test]
fn presets() {
    let p = compression_preset(50, 10, 0);
    assert_eq!((p.max_units, p.max_conds, p.cond_pool), (5, 10, 40));
    let p = compression_preset(1000, 10, 0);
    assert_eq!((p.max_units, p.max_conds), (16, 63));
    let nets = generate_reservoir(&compression_preset(100, 20, 1)).unwrap();
    let s = reservoir_stats(&nets, Parallelism::Sequential).unwrap();
    assert!((s.arn - 102.0).abs() < 1e-9, "{}", s.arn);
    assert!(s.ratio > 0.0 && s.ratio < 1.0);
}

#[test]
fn single_event_stats() {
    let cfg = GeneratorConfig {
        max_units: 1,
        random_units: false,
        ..small_cfg(10, 1)
    };
    let s = reservoir_stats(&generate_reservoir(&cfg).unwrap(), Parallelism::Sequential).unwrap();
    assert_eq!(s.aen, 0.0);
    assert_eq!(s.ratio, 0.0);
}
