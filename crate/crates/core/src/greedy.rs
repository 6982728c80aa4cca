//! Sequential greedy baseline: fix vertices one at a time, adjusting
//! forward edges so the new weight avoids every processed r-neighbour.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_radius, BallCache, Graph};
use crate::rng;
use crate::verify::{check_capacity, find_conflicts_with, is_r_irregular, ConflictStrategy, EdgeColouring, IncrementalWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    AscendingDegree,
    DescendingDegree,
    Random(u64),
}

impl OrderPolicy {
    pub fn order(self, g: &Graph) -> Vec<usize> {
        let mut order: Vec<usize> = (0..g.n()).collect();
        match self {
            OrderPolicy::AscendingDegree => order.sort_by_key(|&v| (g.degree(v), v)),
            OrderPolicy::DescendingDegree => order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v)),
            OrderPolicy::Random(seed) => order.shuffle(&mut rng::split(seed, rng::stream::GREEDY)),
        }
        order
    }
}

impl fmt::Display for OrderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderPolicy::AscendingDegree => write!(f, "asc"),
            OrderPolicy::DescendingDegree => write!(f, "desc"),
            OrderPolicy::Random(s) => write!(f, "random:{s}"),
        }
    }
}

impl FromStr for OrderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asc" => Ok(OrderPolicy::AscendingDegree),
            "desc" => Ok(OrderPolicy::DescendingDegree),
            _ => s
                .strip_prefix("random:")
                .and_then(|x| x.parse().ok())
                .map(OrderPolicy::Random)
                .ok_or_else(|| Error::Argument(format!("unknown order policy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyResult {
    /// Present only when the run separated every vertex.
    pub colouring: Option<EdgeColouring>,
    pub k: u64,
    pub order_used: Vec<usize>,
    pub conflicts_final: usize,
}

impl GreedyResult {
    pub fn succeeded(&self) -> bool {
        self.colouring.is_some()
    }
}

/// Greedy colouring with palette `1..=k`. A single pass starts every edge
/// at `⌈k/2⌉`, so a pass at `k` can fail where a pass with a smaller
/// palette succeeds; on failure the passes at `k-1, k-2, ..., 1` are tried
/// and the first success is returned with ceiling `k`. Success at `k` thus
/// implies success at `k + 1`.
pub fn greedy_colour(g: &Graph, r: usize, k: u64, order: OrderPolicy) -> Result<GreedyResult> {
    let first = greedy_pass(g, r, k, order)?;
    if first.succeeded() {
        return Ok(first);
    }
    for smaller in (1..k).rev() {
        let res = greedy_pass(g, r, smaller, order)?;
        if let Some(c) = res.colouring {
            let colouring = Some(EdgeColouring::new(g, c.into_colours(), k)?);
            return Ok(GreedyResult { colouring, k, order_used: res.order_used, conflicts_final: 0 });
        }
    }
    Ok(first)
}

/// One pass at palette `k`, without the smaller-palette fallback.
pub fn greedy_pass(g: &Graph, r: usize, k: u64, order: OrderPolicy) -> Result<GreedyResult> {
    greedy_colour_observed(g, r, k, order, |_, _| {})
}

/// As [`greedy_pass`], calling `observe(weights, processed)` after each
/// step.
pub fn greedy_colour_observed<F>(g: &Graph, r: usize, k: u64, order: OrderPolicy, mut observe: F) -> Result<GreedyResult>
where
    F: FnMut(&[u64], &[bool]),
{
    check_radius(r)?;
    if k < 1 {
        return Err(Error::Argument("palette size must be at least 1".into()));
    }
    g.require_no_isolated_edge()?;
    check_capacity(g, k)?;
    let balls = BallCache::build(g, r)?;
    let order_used = order.order(g);
    let sinks = sinks_by_finaliser(g, &order_used);
    let tight = tight_pairs_by_decider(g, &order_used, &sinks);
    let mut run = Run {
        g,
        balls: &balls,
        k,
        state: IncrementalWeights::new(g, vec![k.div_ceil(2); g.m()]),
        processed: vec![false; g.n()],
    };
    let mut failed = false;

    for &v in &order_used {
        if run.processed[v] {
            continue;
        }
        if !run.place(v, &sinks[v], &tight[v]) {
            failed = true;
        }
        run.processed[v] = true;
        for &(u, _) in &sinks[v] {
            run.processed[u] = true;
        }
        observe(run.state.weights(), &run.processed);
    }

    let colours = run.state.into_colours();
    let weights = crate::verify::weights_of(g, &colours);
    let conflicts_final = find_conflicts_with(g, &weights, r, ConflictStrategy::Bucketed, usize::MAX)?.pairs.len();
    let colouring = if failed {
        None
    } else {
        let c = EdgeColouring::new(g, colours, k)?;
        debug_assert!(is_r_irregular(g, &c, r, k));
        Some(c)
    };
    Ok(GreedyResult { colouring, k, order_used, conflicts_final })
}

/// For each vertex `v`, the neighbours `u` all of whose neighbours precede
/// `u` and of which `v` is the last, with the edge `uv`. The weight of such
/// a sink is final as soon as `v` is processed.
fn sinks_by_finaliser(g: &Graph, order: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut sinks = vec![Vec::new(); g.n()];
    for u in 0..g.n() {
        let last = g.adjacency(u).iter().max_by_key(|&&(w, _)| pos[w]);
        if let Some(&(v, e)) = last {
            if pos[v] < pos[u] {
                sinks[v].push((u, e));
            }
        }
    }
    for list in &mut sinks {
        list.sort_unstable_by_key(|&(_, e)| e);
    }
    sinks
}

/// Pairs `(y, u)` where `u` is the only later neighbour of `y` and a sink
/// finalised by `y`. The difference `w(y) - w(u)` does not depend on the
/// colour of `yu`, so it is fixed by the last vertex deciding another edge
/// at `y` or `u`; the pair is listed under that vertex.
fn tight_pairs_by_decider(g: &Graph, order: &[usize], sinks: &[Vec<(usize, usize)>]) -> Vec<Vec<(usize, usize)>> {
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut tight = vec![Vec::new(); g.n()];
    for y in 0..g.n() {
        let [(u, yu)] = sinks[y][..] else { continue };
        if g.adjacency(y).iter().any(|&(x, _)| pos[x] > pos[y] && x != u) {
            continue;
        }
        let decider = g
            .adjacency(y)
            .iter()
            .chain(g.adjacency(u))
            .filter(|&&(_, e)| e != yu)
            .map(|&(_, e)| {
                let (a, b) = g.edge(e);
                if pos[a] < pos[b] { a } else { b }
            })
            .max_by_key(|&x| pos[x]);
        if let Some(d) = decider {
            tight[d].push((y, u));
        }
    }
    tight
}

/// Search nodes allowed per vertex when placing its sinks.
const SINK_SEARCH_LIMIT: usize = 10_000;

/// Values `from, from+1, from-1, from+2, ...` inside `[lo, hi]`.
fn nearest_first(from: i64, lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    let reach = (from - lo).max(hi - from).max(0);
    (0..=reach)
        .flat_map(move |d| if d == 0 { vec![from] } else { vec![from + d, from - d] })
        .filter(move |&x| lo <= x && x <= hi)
}

struct Run<'a> {
    g: &'a Graph,
    balls: &'a BallCache,
    k: u64,
    state: IncrementalWeights<'a>,
    processed: Vec<bool>,
}

struct SinkSearch<'s> {
    /// `(sink, edge, weight without the edge, blocked weights)`.
    sinks: &'s [(usize, usize, i64, HashSet<u64>)],
    /// Weight of `v` without its sink edges and with free edges at 1.
    v_base: i64,
    free: i64,
    k: i64,
    blocked_v: &'s HashSet<u64>,
    free_edges: &'s [usize],
    /// Pairs whose weight difference becomes final at this step.
    tight: &'s [(usize, usize)],
    chosen: Vec<i64>,
    nodes: usize,
}

impl Run<'_> {
    fn blocked(&self, v: usize) -> HashSet<u64> {
        self.balls.ball(v).iter().filter(|&&u| self.processed[u]).map(|&u| self.state.weight(u)).collect()
    }

    /// Separates `v` from its processed r-neighbours by changing its forward
    /// edges, nearest target weight first; forward edges into sinks
    /// finalised by `v` are chosen so those sinks are separated too.
    fn place(&mut self, v: usize, sinks: &[(usize, usize)], tight: &[(usize, usize)]) -> bool {
        let k = self.k as i64;
        let blocked_v = self.blocked(v);
        let mut free: Vec<usize> = self
            .g
            .adjacency(v)
            .iter()
            .filter(|&&(u, e)| !self.processed[u] && !sinks.iter().any(|&(_, se)| se == e))
            .map(|&(_, e)| e)
            .collect();
        free.sort_unstable();
        let sink_info: Vec<(usize, usize, i64, HashSet<u64>)> = sinks
            .iter()
            .map(|&(u, e)| (u, e, (self.state.weight(u) - self.state.colour(e)) as i64, self.blocked(u)))
            .collect();
        let forward_sum: i64 = free.iter().chain(sinks.iter().map(|(_, e)| e)).map(|&e| self.state.colour(e) as i64).sum();
        let mut search = SinkSearch {
            sinks: &sink_info,
            v_base: self.state.weight(v) as i64 - forward_sum + free.len() as i64,
            free: free.len() as i64,
            k,
            blocked_v: &blocked_v,
            free_edges: &free,
            tight,
            chosen: Vec::new(),
            nodes: 0,
        };
        let current: Vec<i64> = sinks.iter().map(|&(_, e)| self.state.colour(e) as i64).collect();
        let free_now: i64 = free.iter().map(|&e| self.state.colour(e) as i64 - 1).sum();
        let Some(t) = search.run(self, &current, free_now) else {
            return false;
        };
        for (i, &(_, e)) in sinks.iter().enumerate() {
            self.state.set_colour(e, search.chosen[i] as u64);
        }
        let delta = t - self.state.weight(v) as i64;
        for (e, step) in distribute(&self.state, &free, delta, k) {
            self.state.add(e, step);
        }
        true
    }
}

/// Spreads `delta` over `free` in order, each edge taking as much as its
/// colour range allows.
fn distribute(state: &IncrementalWeights<'_>, free: &[usize], mut delta: i64, k: i64) -> Vec<(usize, i64)> {
    let mut steps = Vec::new();
    for &e in free {
        if delta == 0 {
            break;
        }
        let c = state.colour(e) as i64;
        let step = delta.clamp(1 - c, k - c);
        if step != 0 {
            steps.push((e, step));
        }
        delta -= step;
    }
    debug_assert_eq!(delta, 0);
    steps
}

impl SinkSearch<'_> {
    /// Whether spreading `delta` over the free edges leaves every tight
    /// pair with distinct weights.
    fn keeps_tight(&self, run: &Run<'_>, delta: i64) -> bool {
        if self.tight.is_empty() {
            return true;
        }
        let steps = distribute(&run.state, self.free_edges, delta, self.k);
        let shift = |x: usize| -> i64 {
            steps
                .iter()
                .filter(|&&(e, _)| {
                    let (a, b) = run.g.edge(e);
                    a == x || b == x
                })
                .map(|&(_, s)| s)
                .sum()
        };
        self.tight
            .iter()
            .all(|&(y, u)| run.state.weight(y) as i64 + shift(y) != run.state.weight(u) as i64 + shift(u))
    }

    /// Depth-first over sink colours, nearest to the current colour first;
    /// returns the weight of `v` once all sinks are placed.
    fn run(&mut self, run: &Run<'_>, current: &[i64], free_now: i64) -> Option<i64> {
        let i = self.chosen.len();
        if i == self.sinks.len() {
            let base = self.v_base + self.chosen.iter().sum::<i64>();
            let sink_weights: Vec<i64> = self.sinks.iter().zip(&self.chosen).map(|(s, &c)| s.2 + c).collect();
            let hi = self.free * (self.k - 1);
            let v_now = base + free_now;
            return nearest_first(free_now, 0, hi)
                .map(|x| base + x)
                .find(|&t| !self.blocked_v.contains(&(t as u64)) && !sink_weights.contains(&t) && self.keeps_tight(run, t - v_now));
        }
        let (u, _, rest, ref blocked_u) = self.sinks[i];
        for c in nearest_first(current[i], 1, self.k) {
            self.nodes += 1;
            if self.nodes > SINK_SEARCH_LIMIT {
                return None;
            }
            let w = rest + c;
            if blocked_u.contains(&(w as u64)) {
                continue;
            }
            let clash = self.sinks[..i]
                .iter()
                .zip(&self.chosen)
                .any(|(s, &cs)| s.2 + cs == w && run.balls.contains(u, s.0));
            if clash {
                continue;
            }
            self.chosen.push(c);
            if let Some(t) = self.run(run, current, free_now) {
                return Some(t);
            }
            self.chosen.pop();
        }
        None
    }
}

/// Result of scanning palettes upward for the greedy heuristic.
#[derive(Debug, Clone)]
pub struct GreedyEstimate {
    /// Smallest successful palette, `None` if none up to `bound` worked.
    pub k: Option<u64>,
    pub policy: Option<OrderPolicy>,
    /// `6 Δ^(r-1)`.
    pub bound: u64,
    pub result: Option<GreedyResult>,
}

impl GreedyEstimate {
    pub fn exceeds_bound(&self) -> bool {
        self.k.is_none()
    }
}

/// `6 Δ^(r-1)`, saturating.
pub fn six_delta_bound(g: &Graph, r: usize) -> u64 {
    let d = g.max_degree().max(2) as u64;
    d.checked_pow(r.saturating_sub(1) as u32)
        .and_then(|p| p.checked_mul(6))
        .unwrap_or(u64::MAX)
}

pub fn greedy_strength_estimate(g: &Graph, r: usize) -> Result<GreedyEstimate> {
    greedy_strength_estimate_seeded(g, r, 0)
}

/// Smallest `k <= 6 Δ^(r-1)` at which any of the three order policies
/// succeeds.
pub fn greedy_strength_estimate_seeded(g: &Graph, r: usize, seed: u64) -> Result<GreedyEstimate> {
    check_radius(r)?;
    g.require_no_isolated_edge()?;
    let bound = six_delta_bound(g, r);
    let policies = [OrderPolicy::AscendingDegree, OrderPolicy::DescendingDegree, OrderPolicy::Random(seed)];
    for k in 1..=bound {
        for policy in policies {
            // passes are enough: the first success of the scan is also the
            // first success of greedy_colour
            let res = greedy_pass(g, r, k, policy)?;
            if res.succeeded() {
                return Ok(GreedyEstimate { k: Some(k), policy: Some(policy), bound, result: Some(res) });
            }
        }
    }
    Ok(GreedyEstimate { k: None, policy: None, bound, result: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn small_examples() {
        let p3 = path(3);
        let res = greedy_colour(&p3, 2, 2, OrderPolicy::AscendingDegree).unwrap();
        let c = res.colouring.expect("P3 separable with two colours");
        assert!(is_r_irregular(&p3, &c, 2, 2));
        assert_eq!(res.conflicts_final, 0);

        // the first vertex must split its two edges, otherwise the last
        // vertex would end on the weight of the second
        let k3 = complete(3);
        for policy in [OrderPolicy::AscendingDegree, OrderPolicy::DescendingDegree, OrderPolicy::Random(1)] {
            let res = greedy_colour(&k3, 1, 3, policy).unwrap();
            assert!(is_r_irregular(&k3, &res.colouring.unwrap(), 1, 3));
        }
        for policy in [OrderPolicy::AscendingDegree, OrderPolicy::DescendingDegree, OrderPolicy::Random(1)] {
            let res = greedy_colour(&k3, 1, 2, policy).unwrap();
            assert!(!res.succeeded());
            assert!(res.conflicts_final > 0);
        }
    }

    #[test]
    fn estimates() {
        for s in 2..=5 {
            assert_eq!(greedy_strength_estimate(&star(s), 2).unwrap().k, Some(s as u64));
        }
        // s_2(C5) = 3; the heuristic needs more but stays under 6Δ
        let est = greedy_strength_estimate(&cycle(5), 2).unwrap();
        assert_eq!((est.k, est.bound), (Some(5), 12));
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("asc".parse::<OrderPolicy>().unwrap(), OrderPolicy::AscendingDegree);
        assert_eq!("random:9".parse::<OrderPolicy>().unwrap(), OrderPolicy::Random(9));
        assert!("sideways".parse::<OrderPolicy>().is_err());
        assert_eq!(OrderPolicy::Random(9).to_string(), "random:9");
    }

    #[test]
    fn processed_weights_stay_frozen() {
        let g = petersen();
        let mut snapshots: Vec<Vec<u64>> = Vec::new();
        let mut flags: Vec<Vec<bool>> = Vec::new();
        greedy_colour_observed(&g, 2, 9, OrderPolicy::Random(3), |w, p| {
            snapshots.push(w.to_vec());
            flags.push(p.to_vec());
        })
        .unwrap();
        for t in 0..snapshots.len() {
            for v in 0..g.n() {
                if flags[t][v] {
                    assert!(snapshots[t..].iter().all(|s| s[v] == snapshots[t][v]));
                }
            }
        }
    }

    #[test]
    fn isolated_edge_rejected() {
        assert!(matches!(greedy_colour(&path(2), 1, 2, OrderPolicy::AscendingDegree), Err(Error::IsolatedEdge(..))));
    }
}
