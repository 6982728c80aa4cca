//! `distirr`: generate graphs, compute or estimate r-distant irregularity
//! strength, build and verify colourings, and run benchmark sweeps.
//!
//! Exit codes: 0 success, 1 the method reported failure (or a colouring
//! has conflicts), 2 bad input.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use distirr::bench::{format_table, run_bench, write_csv, write_jsonl, BenchConfig, Method};
use distirr::construct::{construct, ConstructConfig, ThresholdProfile};
use distirr::exact::{exact_strength, Strength, DEFAULT_BUDGET};
use distirr::generate::{generate, Constraints, Family, GenSpec};
use distirr::greedy::{greedy_colour, greedy_strength_estimate_seeded, OrderPolicy};
use distirr::io::{format_colouring, format_edge_list, parse_colouring, read_edge_list, LabelledGraph};
use distirr::rng::derive_seed;
use distirr::verify::{find_conflicts, is_r_irregular, EdgeColouring};
use distirr::Error;

#[derive(Parser, Debug)]
#[command(name = "distirr", version, about = "r-distant irregularity strength toolkit")]
struct Cli {
    /// Root seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and print it as an edge list.
    Gen(GenArgs),
    /// Exact strength by backtracking (small graphs).
    Exact(ExactArgs),
    /// Sequential greedy colouring.
    Greedy(GreedyArgs),
    /// Randomized staged construction with palette 2Q + 2q.
    Construct(ConstructArgs),
    /// Check a colouring file against a graph.
    Verify(VerifyArgs),
    /// Run methods over a generated corpus.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// path, cycle, star, complete, gnp:P or regular:D
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    min_degree: usize,
    #[arg(long)]
    no_isolated_edges: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 8)]
    kmax: u64,
    /// Search nodes per palette probe.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug)]
struct GreedyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long, required_unless_present = "auto", conflicts_with = "auto")]
    k: Option<u64>,
    /// Smallest k up to 6Δ^(r-1) that works under any order policy.
    #[arg(long)]
    auto: bool,
    /// asc, desc or random:SEED (ignored with --auto).
    #[arg(long, default_value = "asc")]
    order: OrderPolicy,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    /// paper, relaxed:BETA, desk, or custom:key=value,...
    #[arg(long, default_value = "desk")]
    profile: ThresholdProfile,
    #[arg(long, default_value_t = 50)]
    max_rounds: usize,
    #[arg(long)]
    emit_diagnostics: Option<PathBuf>,
    /// On failure, fall back to the greedy estimate.
    #[arg(long)]
    fallback_greedy: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    colouring: PathBuf,
    #[arg(long)]
    r: usize,
    /// Palette ceiling; defaults to the largest colour used.
    #[arg(long)]
    k: Option<u64>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// JSON-lines file of generator specs; overrides --family.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, conflicts_with = "corpus")]
    family: Option<Family>,
    /// Sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "20")]
    n: Vec<usize>,
    /// Instances per size.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    min_degree: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, value_delimiter = ',', default_value = "exact,greedy,construct")]
    methods: Vec<Method>,
    #[arg(long, default_value = "desk")]
    profile: ThresholdProfile,
    #[arg(long, default_value_t = 8)]
    exact_kmax: u64,
    #[arg(long, default_value_t = 10_000_000)]
    exact_budget: u64,
    #[arg(long, default_value_t = 50)]
    max_rounds: usize,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    jsonl: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Precondition(_)) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::Gen(a) => cmd_gen(a, seed),
        Command::Exact(a) => cmd_exact(a),
        Command::Greedy(a) => cmd_greedy(a, seed),
        Command::Construct(a) => cmd_construct(a, seed),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a, seed),
    }
}

fn load_graph(path: &Path) -> anyhow::Result<LabelledGraph> {
    read_edge_list(path).with_context(|| format!("reading graph {}", path.display()))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_colouring(lg: &LabelledGraph, c: &EdgeColouring) -> anyhow::Result<()> {
    emit(&format_colouring(&lg.graph, Some(&lg.labels), c.colours()))
}

fn write_json(path: &Path, value: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen(a: GenArgs, seed: u64) -> anyhow::Result<u8> {
    let constraints = Constraints { min_degree: a.min_degree, forbid_isolated_edges: a.no_isolated_edges };
    let spec = GenSpec::new(a.family, a.n, seed).with_constraints(constraints);
    let g = match generate(&spec) {
        Ok(g) => g,
        Err(e @ Error::Generation(_)) => {
            eprintln!("error: {e}");
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let text = format_edge_list(&g, None);
    match a.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => emit(&text)?,
    }
    eprintln!("{}: n = {}, m = {}, Δ = {}, δ = {}", spec.id(), g.n(), g.m(), g.max_degree(), g.min_degree());
    Ok(0)
}

fn labelled_triples(lg: &LabelledGraph, c: &EdgeColouring) -> Vec<Value> {
    lg.graph
        .edges()
        .iter()
        .zip(c.colours())
        .map(|(&(u, v), &col)| json!([lg.labels[u], lg.labels[v], col]))
        .collect()
}

fn cmd_exact(a: ExactArgs) -> anyhow::Result<u8> {
    let lg = load_graph(&a.graph)?;
    let res = exact_strength(&lg.graph, a.r, a.kmax, a.budget)?;
    let (strength, status, code) = match res.strength {
        Strength::Exact(k) => (json!(k), "exact".to_string(), 0),
        Strength::UnknownAbove(k) => (Value::Null, format!("unknown above {k}"), 1),
        Strength::BudgetExceeded(k) => (Value::Null, format!("budget exceeded at k = {k}"), 1),
    };
    let mut out = json!({
        "strength": strength,
        "status": status,
        "nodes": res.nodes_explored,
        "millis": res.elapsed.as_millis() as u64,
    });
    if let Some(w) = &res.witness {
        out["witness"] = Value::Array(labelled_triples(&lg, w));
    }
    emit(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(code)
}

fn cmd_greedy(a: GreedyArgs, seed: u64) -> anyhow::Result<u8> {
    let lg = load_graph(&a.graph)?;
    let g = &lg.graph;
    if a.auto {
        let est = greedy_strength_estimate_seeded(g, a.r, seed)?;
        return match (est.k, est.policy, est.result.and_then(|r| r.colouring)) {
            (Some(k), Some(policy), Some(c)) => {
                print_colouring(&lg, &c)?;
                eprintln!("greedy: k = {k} (order {policy}, bound {})", est.bound);
                Ok(0)
            }
            _ => {
                eprintln!("greedy: no palette up to the bound {} worked", est.bound);
                Ok(1)
            }
        };
    }
    let k = a.k.expect("clap enforces --k or --auto");
    let res = greedy_colour(g, a.r, k, a.order)?;
    match &res.colouring {
        Some(c) => {
            print_colouring(&lg, c)?;
            eprintln!("greedy: k = {k}, order {}", a.order);
            Ok(0)
        }
        None => {
            eprintln!("greedy: failed at k = {k}, order {}, {} conflicts left", a.order, res.conflicts_final);
            Ok(1)
        }
    }
}

fn cmd_construct(a: ConstructArgs, seed: u64) -> anyhow::Result<u8> {
    let lg = load_graph(&a.graph)?;
    let g = &lg.graph;
    let config = ConstructConfig {
        r: a.r,
        seed,
        profile: a.profile.clone(),
        max_rounds: a.max_rounds,
        check_invariants: true,
    };
    let out = construct(g, &config)?;
    let diag = &out.diagnostics;
    let mut record = serde_json::to_value(diag)?;
    let mut code = 0;
    match &out.colouring {
        Some(c) => {
            print_colouring(&lg, c)?;
            eprintln!("construct: k = {} (Q = {}, q = {}), verified", out.k_used, diag.big_q, diag.small_q);
        }
        None => {
            let stage = diag.failed_stage().unwrap_or("unknown");
            eprintln!("construct: failed at {stage} ({} failure records)", diag.failure_count);
            code = 1;
            if a.fallback_greedy {
                let est = greedy_strength_estimate_seeded(g, a.r, seed)?;
                if let (Some(k), Some(policy), Some(c)) = (est.k, est.policy, est.result.and_then(|r| r.colouring)) {
                    print_colouring(&lg, &c)?;
                    eprintln!("construct: greedy fallback used, k = {k} (order {policy})");
                    record["fallback"] = json!({ "method": "greedy", "k": k, "order": policy.to_string() });
                    code = 0;
                } else {
                    record["fallback"] = json!({ "method": "greedy", "k": null });
                }
            }
        }
    }
    if let Some(path) = &a.emit_diagnostics {
        write_json(path, &record)?;
    }
    Ok(code)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let lg = load_graph(&a.graph)?;
    let g = &lg.graph;
    let text = fs::read_to_string(&a.colouring).with_context(|| format!("reading colouring {}", a.colouring.display()))?;
    let colours = parse_colouring(&text, &lg).with_context(|| format!("parsing {}", a.colouring.display()))?;
    let c = EdgeColouring::from_colours(g, colours)?;
    let k = a.k.unwrap_or_else(|| c.max_colour());
    let report = find_conflicts(g, &c, a.r)?;
    let valid = is_r_irregular(g, &c, a.r, k);
    let conflicts: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| json!({ "u": lg.labels[p.u], "v": lg.labels[p.v], "weight": p.weight }))
        .collect();
    let out = json!({
        "valid": valid,
        "k": k,
        "max_colour": c.max_colour(),
        "conflicts": conflicts,
        "overflow": report.overflow,
    });
    emit(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(if valid { 0 } else { 1 })
}

fn read_corpus(path: &Path) -> anyhow::Result<Vec<GenSpec>> {
    let file = fs::File::open(path).with_context(|| format!("reading corpus {}", path.display()))?;
    let mut specs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let spec: GenSpec =
            serde_json::from_str(&line).with_context(|| format!("{}: line {}", path.display(), i + 1))?;
        specs.push(spec);
    }
    Ok(specs)
}

fn cmd_bench(a: BenchArgs, seed: u64) -> anyhow::Result<u8> {
    let corpus = match (&a.corpus, a.family) {
        (Some(path), _) => read_corpus(path)?,
        (None, Some(family)) => {
            let constraints = Constraints { min_degree: a.min_degree, forbid_isolated_edges: true };
            let mut specs = Vec::new();
            for &n in &a.n {
                for _ in 0..a.count {
                    let s = derive_seed(seed, specs.len() as u64);
                    specs.push(GenSpec::new(family, n, s).with_constraints(constraints));
                }
            }
            specs
        }
        (None, None) => bail!(Error::Argument("bench needs --corpus or --family".into())),
    };
    let cfg = BenchConfig {
        r: a.r,
        methods: a.methods,
        exact_kmax: a.exact_kmax,
        exact_budget: a.exact_budget,
        profile: a.profile,
        max_rounds: a.max_rounds,
        threads: a.threads,
    };
    let records = run_bench(&corpus, &cfg)?;
    emit(&format_table(&records))?;
    if let Some(path) = &a.csv {
        let f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        write_csv(&records, io::BufWriter::new(f))?;
    }
    if let Some(path) = &a.jsonl {
        let f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        write_jsonl(&records, io::BufWriter::new(f))?;
    }
    Ok(0)
}
