//! Exact r-distant irregularity strength of small graphs by backtracking,
//! together with two lower bounds.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_radius, BallCache, Graph};
use crate::verify::{check_capacity, is_r_irregular, EdgeColouring};

/// Default node budget per palette probe.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(EdgeColouring),
    /// The whole search space at this palette was exhausted.
    None,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Why the reported strength cannot be lowered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Strength 1 needs no proof.
    Trivial,
    /// The palette one below was searched exhaustively.
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "k")]
pub enum Strength {
    Exact(u64),
    UnknownAbove(u64),
    /// The node budget ran out while probing this palette.
    BudgetExceeded(u64),
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub strength: Strength,
    pub witness: Option<EdgeColouring>,
    pub certificate: Option<Certificate>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Edge order: repeatedly take the uncoloured edge with the most endpoints
/// already touched, preferring edges that finalize a vertex, then the lowest
/// index.
fn search_order(g: &Graph) -> Vec<usize> {
    let m = g.m();
    let mut touched = vec![false; g.n()];
    let mut remaining: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<((usize, usize), usize)> = None;
        for e in 0..m {
            if used[e] {
                continue;
            }
            let (u, v) = g.edge(e);
            let t = touched[u] as usize + touched[v] as usize;
            let fin = (remaining[u] == 1) as usize + (remaining[v] == 1) as usize;
            let key = (t, fin);
            if best.map_or(true, |(k, _)| key > k) {
                best = Some((key, e));
            }
        }
        let e = best.unwrap().1;
        used[e] = true;
        order.push(e);
        let (u, v) = g.edge(e);
        touched[u] = true;
        touched[v] = true;
        remaining[u] -= 1;
        remaining[v] -= 1;
    }
    order
}

struct Search<'a> {
    g: &'a Graph,
    balls: &'a BallCache,
    order: Vec<usize>,
    k: u64,
    colours: Vec<u64>,
    weight: Vec<u64>,
    remaining: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn finalized_conflict(&self, v: usize) -> bool {
        self.balls
            .ball(v)
            .iter()
            .any(|&u| self.remaining[u] == 0 && self.weight[u] == self.weight[v])
    }

    /// `Some(true)` on success, `Some(false)` when exhausted, `None` when
    /// out of budget.
    fn dfs(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let e = self.order[depth];
        let (u, v) = self.g.edge(e);
        self.remaining[u] -= 1;
        self.remaining[v] -= 1;
        let mut result = Some(false);
        for c in 1..=self.k {
            if self.nodes >= self.budget {
                result = None;
                break;
            }
            self.nodes += 1;
            self.colours[e] = c;
            self.weight[u] += c;
            self.weight[v] += c;
            let pruned = (self.remaining[u] == 0 && self.finalized_conflict(u))
                || (self.remaining[v] == 0 && self.finalized_conflict(v));
            let sub = if pruned { Some(false) } else { self.dfs(depth + 1) };
            if sub == Some(true) {
                return sub;
            }
            self.weight[u] -= c;
            self.weight[v] -= c;
            if sub.is_none() {
                result = None;
                break;
            }
        }
        self.colours[e] = 0;
        self.remaining[u] += 1;
        self.remaining[v] += 1;
        result
    }
}

fn check_input(g: &Graph, r: usize, k: u64) -> Result<()> {
    check_radius(r)?;
    if k < 1 {
        return Err(Error::Argument("palette size must be at least 1".into()));
    }
    g.require_no_isolated_edge()?;
    check_capacity(g, k)
}

/// Searches for a colouring with palette `1..=k` and no conflict between
/// r-neighbours.
pub fn exists_colouring(g: &Graph, r: usize, k: u64, budget: u64) -> Result<Probe> {
    check_input(g, r, k)?;
    let balls = BallCache::build(g, r)?;
    Ok(probe(g, &balls, k, budget))
}

fn probe(g: &Graph, balls: &BallCache, k: u64, budget: u64) -> Probe {
    let mut s = Search {
        g,
        balls,
        order: search_order(g),
        k,
        colours: vec![0; g.m()],
        weight: vec![0; g.n()],
        remaining: (0..g.n()).map(|v| g.degree(v)).collect(),
        nodes: 0,
        budget,
    };
    // vertices without edges are final from the start; they have no
    // r-neighbours, so there is nothing to check for them
    let outcome = match s.dfs(0) {
        Some(true) => {
            let c = EdgeColouring::new(g, s.colours.clone(), k).expect("colours within palette");
            assert!(is_r_irregular(g, &c, balls.radius(), k), "solver produced an invalid witness");
            SearchOutcome::Found(c)
        }
        Some(false) => SearchOutcome::None,
        None => SearchOutcome::BudgetExceeded,
    };
    Probe { outcome, nodes: s.nodes }
}

/// True iff some pair of r-neighbours shares a degree, i.e. the all-ones
/// colouring fails.
fn has_same_degree_r_neighbours(g: &Graph, balls: &BallCache) -> bool {
    (0..g.n()).any(|v| balls.ball(v).iter().any(|&u| g.degree(u) == g.degree(v)))
}

/// Least palette admitting an r-distant irregular colouring, searching
/// upward from a lower bound up to `k_max`.
pub fn exact_strength(g: &Graph, r: usize, k_max: u64, budget: u64) -> Result<ExactResult> {
    check_input(g, r, k_max.max(1))?;
    let start_time = Instant::now();
    let balls = BallCache::build(g, r)?;
    let start = if has_same_degree_r_neighbours(g, &balls) {
        degree_class_lower_bound_cached(g, &balls).max(2)
    } else {
        1
    };
    let mut nodes = 0;
    let mut exhausted_below = start == 1;
    // the lower bound alone proves start - 1 infeasible; the invariant asks
    // for an exhaustive search there as well
    if start > 1 {
        let below = probe(g, &balls, start - 1, budget);
        nodes += below.nodes;
        match below.outcome {
            SearchOutcome::None => exhausted_below = true,
            SearchOutcome::Found(_) => panic!("lower bound {start} contradicted by a witness"),
            SearchOutcome::BudgetExceeded => {}
        }
    }
    let mut k = start;
    while k <= k_max {
        let p = probe(g, &balls, k, budget);
        nodes += p.nodes;
        match p.outcome {
            SearchOutcome::Found(c) => {
                let certificate = if k == 1 {
                    Certificate::Trivial
                } else if exhausted_below {
                    Certificate::Exhausted
                } else {
                    return Ok(ExactResult {
                        strength: Strength::BudgetExceeded(k - 1),
                        witness: Some(c),
                        certificate: None,
                        nodes_explored: nodes,
                        elapsed: start_time.elapsed(),
                    });
                };
                return Ok(ExactResult {
                    strength: Strength::Exact(k),
                    witness: Some(c),
                    certificate: Some(certificate),
                    nodes_explored: nodes,
                    elapsed: start_time.elapsed(),
                });
            }
            SearchOutcome::None => exhausted_below = true,
            SearchOutcome::BudgetExceeded => {
                return Ok(ExactResult {
                    strength: Strength::BudgetExceeded(k),
                    witness: None,
                    certificate: None,
                    nodes_explored: nodes,
                    elapsed: start_time.elapsed(),
                });
            }
        }
        k += 1;
    }
    Ok(ExactResult {
        strength: Strength::UnknownAbove(k_max),
        witness: None,
        certificate: None,
        nodes_explored: nodes,
        elapsed: start_time.elapsed(),
    })
}

/// Counting bound `n/d + (d-1)/d` for a d-regular graph, as an exact
/// rational.
pub fn regular_counting_lower_bound(g: &Graph) -> Result<Ratio<u64>> {
    if !g.is_regular() {
        return Err(Error::NotRegular { min: g.min_degree(), max: g.max_degree() });
    }
    let d = g.max_degree() as u64;
    if d == 0 {
        return Err(Error::Argument("counting bound needs degree at least 1".into()));
    }
    let n = g.n() as u64;
    Ok(Ratio::new(n, d) + Ratio::new(d - 1, d))
}

/// Ceiling of a non-negative rational.
pub fn ceil_ratio(x: Ratio<u64>) -> u64 {
    x.ceil().to_integer()
}

/// Lower bound from same-degree vertices that are pairwise r-neighbours:
/// degree-d weights lie in `[d, d·k]`, so `s` such vertices need
/// `d·(k-1) + 1 >= s`. Candidate sets are grown greedily from every vertex.
pub fn degree_class_lower_bound(g: &Graph, r: usize) -> Result<u64> {
    let balls = BallCache::build(g, r)?;
    Ok(degree_class_lower_bound_cached(g, &balls))
}

fn degree_class_lower_bound_cached(g: &Graph, balls: &BallCache) -> u64 {
    let mut best = 1u64;
    for v in 0..g.n() {
        let d = g.degree(v);
        if d == 0 {
            continue;
        }
        let mut clique = vec![v];
        for &u in balls.ball(v) {
            if g.degree(u) == d && clique.iter().all(|&w| w == v || balls.contains(u, w)) {
                clique.push(u);
            }
        }
        let s = clique.len() as u64;
        let d = d as u64;
        // least k with d*(k-1) + 1 >= s
        let k = 1 + (s - 1).div_ceil(d);
        best = best.max(k);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn strength(g: &Graph, r: usize) -> u64 {
        match exact_strength(g, r, 10, DEFAULT_BUDGET).unwrap().strength {
            Strength::Exact(k) => k,
            s => panic!("no exact strength: {s:?}"),
        }
    }

    #[test]
    fn probe_examples() {
        let p3 = path(3);
        assert_eq!(exists_colouring(&p3, 2, 1, DEFAULT_BUDGET).unwrap().outcome, SearchOutcome::None);
        match exists_colouring(&p3, 2, 2, DEFAULT_BUDGET).unwrap().outcome {
            SearchOutcome::Found(c) => assert!(is_r_irregular(&p3, &c, 2, 2)),
            o => panic!("{o:?}"),
        }
        assert_eq!(exists_colouring(&complete(3), 1, 2, DEFAULT_BUDGET).unwrap().outcome, SearchOutcome::None);
    }

    #[test]
    fn strength_examples() {
        assert_eq!(strength(&path(3), 2), 2);
        assert_eq!(strength(&path(3), 1), 1);
        assert_eq!(strength(&complete(3), 1), 3);
        assert_eq!(strength(&star(3), 2), 3);
        assert_eq!(strength(&cycle(5), 2), 3);
    }

    #[test]
    fn isolated_edge_is_undefined() {
        let k2 = path(2);
        assert_eq!(exists_colouring(&k2, 1, 3, 10), Err(Error::IsolatedEdge(0, 1)));
        assert!(exact_strength(&k2, 1, 3, 10).is_err());
    }

    #[test]
    fn budget_and_ceiling() {
        let p = exists_colouring(&cycle(5), 2, 3, 3).unwrap();
        assert_eq!(p.outcome, SearchOutcome::BudgetExceeded);
        assert_eq!(p.nodes, 3);
        let res = exact_strength(&complete(3), 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.strength, Strength::UnknownAbove(2));
        assert!(res.witness.is_none());
    }

    #[test]
    fn counting_bound_examples() {
        assert_eq!(regular_counting_lower_bound(&cycle(5)).unwrap(), Ratio::from_integer(3));
        let c4 = regular_counting_lower_bound(&cycle(4)).unwrap();
        assert_eq!(c4, Ratio::new(5, 2));
        assert_eq!(ceil_ratio(c4), 3);
        assert_eq!(regular_counting_lower_bound(&complete(4)).unwrap(), Ratio::from_integer(2));
        assert!(matches!(regular_counting_lower_bound(&path(3)), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn degree_class_bound_examples() {
        assert_eq!(degree_class_lower_bound(&star(3), 2).unwrap(), 3);
        assert_eq!(degree_class_lower_bound(&path(3), 1).unwrap(), 1);
        assert_eq!(degree_class_lower_bound(&cycle(5), 2).unwrap(), 3);
    }
}
