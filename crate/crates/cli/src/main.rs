use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use pspan::generator::{
    compression_preset, compression_sweep, generate_reservoir_with, plant, planting_report_json, reservoir_stats,
    GenError, GeneratorConfig, PlantingConfig, PlantingLedger, PlantingReport,
};
use pspan::io::{parse_reservoir, write_atomic, write_reservoir, IoError};
use pspan::miner::{mine, nets_to_netgraphs, results_json, MineError, MinerConfig, ResultsJson};
use pspan::oracle::{brute_force_mine_with, diff_results, DiffReport, OracleError};
use pspan::par::Parallelism;
use pspan::petri::Net;

#[derive(Parser)]
#[command(name = "pspan", version, about = "Mine frequent complete subnets of C/E nets")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random reservoir of pure C/E nets.
    Generate(GenerateArgs),
    /// Plant random nets into a reservoir and write the placement ledger.
    Plant(PlantArgs),
    /// Mine frequent complete subnets.
    Mine(MineArgs),
    /// Check mining results against a planting ledger or the exhaustive oracle.
    Validate(ValidateArgs),
    /// Run the exhaustive miner on a small reservoir.
    Oracle(OracleArgs),
    /// Arc and net graph edge statistics as CSV.
    Stats(StatsArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 100)]
    amount: usize,
    /// Events per net (upper bound with --random-events).
    #[arg(long, default_value_t = 6)]
    max_events: usize,
    /// Arcs per event (upper bound with --random-conds).
    #[arg(long, default_value_t = 8)]
    max_conds: usize,
    #[arg(long)]
    random_events: bool,
    #[arg(long)]
    random_conds: bool,
    #[arg(long, default_value_t = 26)]
    event_pool: usize,
    #[arg(long, default_value_t = 26)]
    cond_pool: usize,
    /// Ignore the size flags and aim at this many arcs per net.
    #[arg(long)]
    target_arcs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PlantArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    ledger: PathBuf,
    /// Number of planting nets.
    #[arg(long, default_value_t = 10)]
    nets: usize,
    #[arg(long, default_value_t = 500)]
    minsup: usize,
    #[arg(long, default_value_t = 6)]
    max_events: usize,
    #[arg(long, default_value_t = 8)]
    max_conds: usize,
    /// Accepted node count of a planting net, as MIN,MAX.
    #[arg(long, default_value = "9,15", value_parser = parse_range)]
    nodes: (usize, usize),
    /// Accepted arc count of a planting net, as MIN,MAX.
    #[arg(long, default_value = "10,19", value_parser = parse_range)]
    arcs: (usize, usize),
    #[arg(long, default_value_t = 26)]
    event_pool: usize,
    #[arg(long, default_value_t = 26)]
    cond_pool: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct MineArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    minsup: usize,
    /// Largest pattern in events.
    #[arg(long)]
    max_events: Option<usize>,
    #[arg(long, default_value_t = 1 << 20)]
    max_embeddings: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Results written by `mine`.
    #[arg(long)]
    results: PathBuf,
    /// Planting ledger written by `plant`.
    #[arg(long, conflicts_with = "oracle")]
    ledger: Option<PathBuf>,
    /// Compare against the exhaustive oracle run on --input.
    #[arg(long, requires = "input")]
    oracle: bool,
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Pattern size compared in oracle mode.
    #[arg(long, default_value_t = 4)]
    max_events: usize,
    /// Where to write the report as JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    minsup: usize,
    #[arg(long, default_value_t = 4)]
    max_events: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Reservoir files, one CSV row each.
    inputs: Vec<PathBuf>,
    /// Generate one preset reservoir per arc target instead, e.g. 50,100,200.
    #[arg(long, value_delimiter = ',', conflicts_with = "inputs")]
    sweep: Vec<usize>,
    /// Nets per sweep reservoir.
    #[arg(long, default_value_t = 200)]
    amount: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected MIN,MAX")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Usage(String),
    Io(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Data(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Usage(m) | Failure::Io(m) | Failure::Data(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io { .. } => Failure::Io(e.to_string()),
            IoError::Format { .. } => Failure::Data(e.to_string()),
        }
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        match e {
            GenError::ConfigInvalid(_) => Failure::Usage(e.to_string()),
            e => Failure::Data(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// A reservoir plus the file line of each net, for error messages.
struct Reservoir {
    nets: Vec<Net>,
    lines: Vec<usize>,
}

fn read_text(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<Reservoir> {
    let text = read_text(path)?;
    let nets = parse_reservoir(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, _)| i + 1)
        .collect();
    Ok(Reservoir { nets, lines })
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn mine_failure(e: MineError, path: &Path, r: &Reservoir) -> Failure {
    match e {
        MineError::Input { index, source } => {
            Failure::Data(format!("{}: line {}: {source}", path.display(), r.lines[index]))
        }
        MineError::EmptyInput | MineError::ZeroMinsup => Failure::Usage(e.to_string()),
        e => Failure::Data(e.to_string()),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Res<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    Ok(write_atomic(path, text.as_bytes())?)
}

#[derive(Serialize)]
struct Meta<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    config: C,
}

/// Writes `<output>.meta.json` next to an artifact.
fn write_meta<C: Serialize>(output: &Path, command: &str, seed: u64, config: C) -> Res<()> {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    let meta = Meta {
        tool: "pspan",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
    };
    write_json(Path::new(&name), &meta)
}

/// `PSPAN_SEED` wins over the flag.
fn effective_seed(flag: u64) -> Res<u64> {
    match std::env::var("PSPAN_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("PSPAN_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn cmd_generate(a: GenerateArgs, mode: Parallelism) -> Res<()> {
    let seed = effective_seed(a.seed)?;
    let cfg = match a.target_arcs {
        Some(t) => compression_preset(t, a.amount, seed),
        None => GeneratorConfig {
            amount: a.amount,
            max_units: a.max_events,
            max_conds: a.max_conds,
            random_units: a.random_events,
            random_conds: a.random_conds,
            event_pool: a.event_pool,
            cond_pool: a.cond_pool,
            seed,
        },
    };
    let nets = generate_reservoir_with(&cfg, mode)?;
    write_reservoir(&a.output, &nets)?;
    write_meta(&a.output, "generate", seed, &cfg)?;
    let arcs: usize = nets.iter().map(|n| n.arcs.len()).sum();
    println!(
        "wrote {} nets to {} ({:.1} arcs per net)",
        nets.len(),
        a.output.display(),
        arcs as f64 / nets.len().max(1) as f64
    );
    Ok(())
}

#[derive(Serialize)]
struct PlantMeta<'a> {
    input: &'a Path,
    planting: &'a PlantingConfig,
}

fn cmd_plant(a: PlantArgs) -> Res<()> {
    let seed = effective_seed(a.seed)?;
    let cfg = PlantingConfig {
        n: a.nets,
        max_events: a.max_events,
        max_conds: a.max_conds,
        minsup: a.minsup,
        seed,
        nodes: a.nodes,
        arcs: a.arcs,
        event_pool: a.event_pool,
        cond_pool: a.cond_pool,
    };
    let reservoir = load(&a.input)?;
    let (nets, ledger) = plant(&reservoir.nets, &cfg)?;
    write_reservoir(&a.output, &nets)?;
    write_json(&a.ledger, &ledger)?;
    write_meta(&a.output, "plant", seed, PlantMeta { input: &a.input, planting: &cfg })?;
    println!("{:<8} {:>6} {:>5} {:>4} {:>6}", "net", "events", "nodes", "arcs", "m(x)");
    for (x, row) in ledger.planting_nets.iter().zip(&ledger.placements) {
        println!(
            "{:<8} {:>6} {:>5} {:>4} {:>6}",
            row.planting_id,
            x.events.len(),
            x.events.len() + x.conditions.len(),
            x.arcs.len(),
            row.m
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct MineMeta<'a> {
    input: &'a Path,
    minsup: usize,
    max_events: Option<usize>,
    max_embeddings: usize,
}

fn cmd_mine(a: MineArgs, mode: Parallelism) -> Res<()> {
    let reservoir = load(&a.input)?;
    let start = Instant::now();
    let ngs = nets_to_netgraphs(&reservoir.nets, mode).map_err(|e| mine_failure(e, &a.input, &reservoir))?;
    let mut cfg = MinerConfig::new(a.minsup);
    cfg.max_nodes = a.max_events;
    cfg.max_embeddings = a.max_embeddings;
    cfg.parallelism = mode;
    let result = mine(&ngs, &cfg).map_err(|e| mine_failure(e, &a.input, &reservoir))?;
    let elapsed = start.elapsed();
    let json = results_json(&result).map_err(|e| Failure::Data(e.to_string()))?;
    write_json(&a.output, &json)?;
    write_meta(
        &a.output,
        "mine",
        0,
        MineMeta {
            input: &a.input,
            minsup: a.minsup,
            max_events: a.max_events,
            max_embeddings: a.max_embeddings,
        },
    )?;
    println!("{:>5} {:>8}", "edges", "patterns");
    for (j, n) in json.buckets.iter().enumerate() {
        println!("{j:>5} {n:>8}");
    }
    // Each stored slot is a u32 node id; graph ids add at most as much again.
    let peak_kib = result.stats.embeddings_peak * 2 * std::mem::size_of::<u32>() / 1024;
    println!(
        "{} patterns from {} nets at minsup {} in {:.2}s, peak embedding table ~{} KiB",
        result.len(),
        result.inputs,
        a.minsup,
        elapsed.as_secs_f64(),
        peak_kib
    );
    Ok(())
}

fn print_planting(r: &PlantingReport) {
    println!(
        "{:<8} {:>6} {:>5} {:>4} {:>7} {:>6} {:>6}",
        "net", "events", "nodes", "arcs", "planted", "mined", "ratio"
    );
    for row in &r.rows {
        println!(
            "{:<8} {:>6} {:>5} {:>4} {:>7} {:>6} {:>6.2}",
            row.planting_id, row.events, row.nodes, row.arcs, row.planted, row.mined, row.ratio
        );
    }
}

fn print_diff(d: &DiffReport) {
    println!(
        "missing {}, extra {}, support mismatches {}",
        d.missing.len(),
        d.extra.len(),
        d.support_mismatch.len()
    );
    for m in &d.missing {
        println!("  missing {} (support {})", m.net.id, m.support);
    }
    for m in &d.extra {
        println!("  extra {} (support {})", m.net.id, m.support);
    }
    for m in &d.support_mismatch {
        println!("  {}: mined {} vs oracle {}", m.net.id, m.pspan, m.oracle);
    }
}

fn oracle_failure(e: OracleError, path: &Path, r: &Reservoir) -> Failure {
    match &e {
        OracleError::SizeGuardExceeded { id, .. } | OracleError::NotPure(id) => {
            let line = r.nets.iter().position(|n| &n.id == id).map(|i| r.lines[i]).unwrap_or(0);
            Failure::Data(format!("{}: line {line}: {e}", path.display()))
        }
        OracleError::Net(_) => Failure::Data(format!("{}: {e}", path.display())),
    }
}

fn cmd_validate(a: ValidateArgs, mode: Parallelism) -> Res<()> {
    let results: ResultsJson = load_json(&a.results)?;
    if let Some(path) = &a.ledger {
        let ledger: PlantingLedger = load_json(path)?;
        let report = planting_report_json(&results, &ledger).map_err(|e| Failure::Data(e.to_string()))?;
        print_planting(&report);
        if let Some(out) = &a.output {
            write_json(out, &report)?;
        }
        if !report.pass {
            let missing: Vec<&str> = report
                .rows
                .iter()
                .filter(|r| r.ratio < 1.0)
                .map(|r| r.planting_id.as_str())
                .collect();
            return Err(Failure::Validation(format!("not recovered: {}", missing.join(", "))));
        }
        println!("all {} planting nets recovered", report.rows.len());
        return Ok(());
    }
    if !a.oracle {
        return Err(Failure::Usage("validate needs --ledger or --oracle".into()));
    }
    let input = a.input.as_deref().expect("clap enforces --input");
    let reservoir = load(input)?;
    let classes = brute_force_mine_with(&reservoir.nets, results.minsup, a.max_events, mode)
        .map_err(|e| oracle_failure(e, input, &reservoir))?;
    let mined: Vec<(Net, usize)> = results
        .patterns
        .iter()
        .filter(|p| p.net.events.len() <= a.max_events)
        .map(|p| (p.net.clone(), p.support))
        .collect();
    let oracle: Vec<(Net, usize)> = classes.into_iter().map(|c| (c.net, c.support)).collect();
    let diff = diff_results(&mined, &oracle).map_err(|e| Failure::Data(e.to_string()))?;
    print_diff(&diff);
    if let Some(out) = &a.output {
        write_json(out, &diff)?;
    }
    if !diff.is_empty() {
        return Err(Failure::Validation("mining results differ from the oracle".into()));
    }
    println!("{} classes up to {} events agree", oracle.len(), a.max_events);
    Ok(())
}

fn cmd_oracle(a: OracleArgs, mode: Parallelism) -> Res<()> {
    if a.minsup == 0 {
        return Err(Failure::Usage("minimum support must be at least 1".into()));
    }
    let reservoir = load(&a.input)?;
    let start = Instant::now();
    let classes = brute_force_mine_with(&reservoir.nets, a.minsup, a.max_events, mode)
        .map_err(|e| oracle_failure(e, &a.input, &reservoir))?;
    write_json(&a.output, &classes)?;
    println!(
        "{} classes up to {} events in {:.2}s",
        classes.len(),
        a.max_events,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn cmd_stats(a: StatsArgs, mode: Parallelism) -> Res<()> {
    let mut csv = String::new();
    if !a.sweep.is_empty() {
        let seed = effective_seed(a.seed)?;
        csv.push_str("target,nets,arn,aen,ratio\n");
        for (t, s) in compression_sweep(&a.sweep, a.amount, seed, mode)? {
            writeln!(csv, "{t},{},{:.4},{:.4},{:.6}", s.nets, s.arn, s.aen, s.ratio).unwrap();
        }
    } else if a.inputs.is_empty() {
        return Err(Failure::Usage("stats needs reservoir files or --sweep".into()));
    } else {
        csv.push_str("reservoir,nets,arn,aen,ratio\n");
        for path in &a.inputs {
            let r = load(path)?;
            let s = reservoir_stats(&r.nets, mode).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
            writeln!(csv, "{},{},{:.4},{:.4},{:.6}", path.display(), s.nets, s.arn, s.aen, s.ratio).unwrap();
        }
    }
    match &a.output {
        Some(out) => write_atomic(out, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cmd: Command, mode: Parallelism) -> Res<()> {
    match cmd {
        Command::Generate(a) => cmd_generate(a, mode),
        Command::Plant(a) => cmd_plant(a),
        Command::Mine(a) => cmd_mine(a, mode),
        Command::Validate(a) => cmd_validate(a, mode),
        Command::Oracle(a) => cmd_oracle(a, mode),
        Command::Stats(a) => cmd_stats(a, mode),
    }
}

#[cfg(feature = "parallel")]
fn run_with_threads(cli: Cli) -> Res<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    let mode = if cli.threads == 1 {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    };
    pool.install(|| run(cli.command, mode))
}

#[cfg(not(feature = "parallel"))]
fn run_with_threads(cli: Cli) -> Res<()> {
    run(cli.command, Parallelism::Sequential)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_with_threads(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pspan: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
