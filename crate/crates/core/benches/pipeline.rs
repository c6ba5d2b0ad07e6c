//! Sequential against rayon-parallel runs of the main stages. Build with
//! `--no-default-features` and both arms run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pspan::generator::{generate_reservoir_with, plant, GeneratorConfig, PlantingConfig};
use pspan::miner::{mine, nets_to_netgraphs, MinerConfig};
use pspan::oracle::brute_force_mine_with;
use pspan::par::Parallelism;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn generate(c: &mut Criterion) {
    let cfg = GeneratorConfig {
        amount: 500,
        max_units: 10,
        max_conds: 8,
        seed: 1,
        ..GeneratorConfig::default()
    };
    let mut g = c.benchmark_group("generate_500");
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| generate_reservoir_with(black_box(&cfg), mode).unwrap()));
    }
    g.finish();
}

fn mining(c: &mut Criterion) {
    let cfg = GeneratorConfig {
        amount: 300,
        seed: 2,
        ..GeneratorConfig::default()
    };
    let reservoir = generate_reservoir_with(&cfg, Parallelism::Parallel).unwrap();
    let pcfg = PlantingConfig {
        n: 4,
        minsup: 150,
        seed: 2,
        ..PlantingConfig::default()
    };
    let (nets, _) = plant(&reservoir, &pcfg).unwrap();
    let ngs = nets_to_netgraphs(&nets, Parallelism::Parallel).unwrap();

    let mut g = c.benchmark_group("mine_planted_300");
    g.sample_size(10);
    for (name, mode) in MODES {
        let mut m = MinerConfig::new(150);
        m.parallelism = mode;
        g.bench_with_input(BenchmarkId::from_parameter(name), &m, |b, m| b.iter(|| mine(&ngs, m).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("encode_300");
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| nets_to_netgraphs(black_box(&nets), mode).unwrap()));
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let cfg = GeneratorConfig {
        amount: 30,
        max_units: 6,
        max_conds: 2,
        random_conds: false,
        event_pool: 1,
        cond_pool: 2,
        seed: 3,
        ..GeneratorConfig::default()
    };
    let nets = generate_reservoir_with(&cfg, Parallelism::Parallel).unwrap();
    let mut g = c.benchmark_group("oracle_30");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| brute_force_mine_with(&nets, 5, 4, mode).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, generate, mining, oracle);
criterion_main!(benches);
