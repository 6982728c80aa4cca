//! Benchmark sweeps over generated corpora.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{construct, ConstructConfig, ThresholdProfile, Thresholds};
use crate::error::{Error, Result};
use crate::exact::{exact_strength, Strength};
use crate::generate::{generate, GenSpec};
use crate::graph::Graph;
use crate::greedy::greedy_strength_estimate_seeded;
use crate::verify::{is_r_irregular, EdgeColouring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Greedy,
    Construct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::Construct => "construct",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            "construct" => Ok(Method::Construct),
            _ => Err(Error::Argument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub r: usize,
    pub method: Method,
    pub k_result: Option<u64>,
    /// Set only by an actual verifier pass on the produced colouring.
    pub verified: bool,
    pub elapsed_ms: f64,
    pub seed: u64,
    /// `ok`, or the reason the method produced no colouring.
    pub status: String,
}

pub const CSV_HEADER: &str = "graph_id,n,m,max_degree,min_degree,r,method,k_result,verified,elapsed_ms,seed,status";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let k = self.k_result.map(|k| k.to_string()).unwrap_or_default();
        let status = self.status.replace(['"', ','], ";");
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3},{},{}",
            self.graph_id,
            self.n,
            self.m,
            self.max_degree,
            self.min_degree,
            self.r,
            self.method,
            k,
            self.verified,
            self.elapsed_ms,
            self.seed,
            status
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub r: usize,
    pub methods: Vec<Method>,
    pub exact_kmax: u64,
    pub exact_budget: u64,
    pub profile: ThresholdProfile,
    pub max_rounds: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            r: 2,
            methods: vec![Method::Exact, Method::Greedy, Method::Construct],
            exact_kmax: 8,
            exact_budget: 10_000_000,
            profile: ThresholdProfile::Custom(Thresholds::desk()),
            max_rounds: 50,
            threads: None,
        }
    }
}

fn verified(g: &Graph, c: &EdgeColouring, r: usize, k: u64) -> bool {
    is_r_irregular(g, c, r, k)
}

fn run_one(spec: &GenSpec, g: &Result<Graph>, method: Method, cfg: &BenchConfig) -> BenchRecord {
    let start = Instant::now();
    let mut rec = BenchRecord {
        graph_id: spec.id(),
        n: spec.n,
        m: 0,
        max_degree: 0,
        min_degree: 0,
        r: cfg.r,
        method,
        k_result: None,
        verified: false,
        elapsed_ms: 0.0,
        seed: spec.seed,
        status: String::new(),
    };
    let g = match g {
        Ok(g) => g,
        Err(e) => {
            rec.status = e.to_string();
            return rec;
        }
    };
    rec.m = g.m();
    rec.max_degree = g.max_degree();
    rec.min_degree = g.min_degree();
    let outcome: Result<(Option<u64>, Option<EdgeColouring>, String)> = match method {
        Method::Exact => exact_strength(g, cfg.r, cfg.exact_kmax, cfg.exact_budget).map(|res| match res.strength {
            Strength::Exact(k) => (Some(k), res.witness, "ok".into()),
            Strength::UnknownAbove(k) => (None, None, format!("unknown above {k}")),
            Strength::BudgetExceeded(k) => (None, None, format!("budget exceeded at k = {k}")),
        }),
        Method::Greedy => greedy_strength_estimate_seeded(g, cfg.r, spec.seed).map(|est| match (est.k, est.result) {
            (Some(k), Some(res)) => (Some(k), res.colouring, "ok".into()),
            _ => (None, None, format!("exceeds bound {}", est.bound)),
        }),
        Method::Construct => {
            let config = ConstructConfig {
                r: cfg.r,
                seed: spec.seed,
                profile: cfg.profile.clone(),
                max_rounds: cfg.max_rounds,
                check_invariants: false,
            };
            construct(g, &config).map(|out| {
                let status = match out.diagnostics.failed_stage() {
                    Some(stage) => format!("failed at {stage} ({} records)", out.diagnostics.failure_count),
                    None => "ok".into(),
                };
                let k = out.colouring.as_ref().map(|_| out.k_used);
                (k, out.colouring, status)
            })
        }
    };
    match outcome {
        Ok((k, colouring, status)) => {
            rec.k_result = k;
            rec.verified = match (k, &colouring) {
                (Some(k), Some(c)) => verified(g, c, cfg.r, k),
                _ => false,
            };
            rec.status = status;
        }
        Err(e) => rec.status = e.to_string(),
    }
    rec.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

/// One record per `(graph, method)`, in corpus order. Failures of a single
/// record are written into its status and never stop the sweep.
pub fn run_bench(corpus: &[GenSpec], cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let sweep = || {
        let graphs: Vec<Result<Graph>> = corpus.par_iter().map(generate).collect();
        let jobs: Vec<(usize, Method)> =
            (0..corpus.len()).flat_map(|i| cfg.methods.iter().map(move |&m| (i, m))).collect();
        jobs.par_iter().map(|&(i, m)| run_one(&corpus[i], &graphs[i], m, cfg)).collect()
    };
    match cfg.threads {
        None => Ok(sweep()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Argument(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(sweep))
        }
    }
}

pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write>(records: &[BenchRecord], mut out: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Aligned plain-text table for terminals.
pub fn format_table(records: &[BenchRecord]) -> String {
    let mut s = format!(
        "{:<40} {:>6} {:>7} {:>4} {:>4} {:>2} {:<9} {:>6} {:>8} {:>10}  status\n",
        "graph", "n", "m", "Δ", "δ", "r", "method", "k", "verified", "ms"
    );
    for r in records {
        let k = r.k_result.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "{:<40} {:>6} {:>7} {:>4} {:>4} {:>2} {:<9} {:>6} {:>8} {:>10.1}  {}\n",
            r.graph_id, r.n, r.m, r.max_degree, r.min_degree, r.r, r.method.to_string(), k, r.verified, r.elapsed_ms, r.status
        ));
    }
    s
}
