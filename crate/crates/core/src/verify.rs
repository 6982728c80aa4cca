//! Weighted degrees, conflict detection and certification of r-distant
//! irregular colourings.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_radius, Bfs, Graph};

/// Largest admissible value of `Δ · k_max`.
pub const WEIGHT_CEILING: u128 = 1 << 62;

/// Default cap on the number of reported conflicts.
pub const DEFAULT_CONFLICT_CAP: usize = 1000;

/// An assignment of positive colours to the edges of a graph, indexed by
/// edge index, with a declared palette ceiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColouring {
    colours: Vec<u64>,
    k_max: u64,
}

impl EdgeColouring {
    /// Validates `1 <= c(e) <= k_max` for every edge and that weights of
    /// `g` cannot overflow.
    pub fn new(g: &Graph, colours: Vec<u64>, k_max: u64) -> Result<Self> {
        if colours.len() != g.m() {
            return Err(Error::Colouring(format!(
                "{} colours for {} edges",
                colours.len(),
                g.m()
            )));
        }
        check_capacity(g, k_max)?;
        if let Some((e, &c)) = colours.iter().enumerate().find(|(_, &c)| c == 0 || c > k_max) {
            return Err(Error::Colouring(format!("edge {e} has colour {c} outside 1..={k_max}")));
        }
        Ok(EdgeColouring { colours, k_max })
    }

    /// Every edge coloured `c`.
    pub fn uniform(g: &Graph, c: u64) -> Result<Self> {
        Self::new(g, vec![c; g.m()], c.max(1))
    }

    /// Builds a colouring whose ceiling is the largest colour used.
    pub fn from_colours(g: &Graph, colours: Vec<u64>) -> Result<Self> {
        let k = colours.iter().copied().max().unwrap_or(1).max(1);
        Self::new(g, colours, k)
    }

    pub fn colours(&self) -> &[u64] {
        &self.colours
    }

    pub fn colour(&self, e: usize) -> u64 {
        self.colours[e]
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    pub fn max_colour(&self) -> u64 {
        self.colours.iter().copied().max().unwrap_or(0)
    }

    pub fn into_colours(self) -> Vec<u64> {
        self.colours
    }
}

/// Rejects palettes for which `Δ · k_max` would leave the exact 62-bit range.
pub fn check_capacity(g: &Graph, k_max: u64) -> Result<()> {
    if (g.max_degree() as u128) * (k_max as u128) >= WEIGHT_CEILING {
        Err(Error::Capacity(format!(
            "max degree {} times palette {} reaches 2^62",
            g.max_degree(),
            k_max
        )))
    } else {
        Ok(())
    }
}

/// Per-vertex weighted degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub weights: Vec<u64>,
}

pub fn weighted_degree(g: &Graph, c: &EdgeColouring, v: usize) -> u64 {
    g.adjacency(v).iter().map(|&(_, e)| c.colour(e)).sum()
}

pub fn weight_profile(g: &Graph, c: &EdgeColouring) -> WeightProfile {
    WeightProfile { weights: weights_of(g, c.colours()) }
}

pub(crate) fn weights_of(g: &Graph, colours: &[u64]) -> Vec<u64> {
    let mut w = vec![0u64; g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        w[u] += colours[e];
        w[v] += colours[e];
    }
    w
}

/// Two r-neighbours sharing a weight, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Conflict {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictReport {
    /// Conflicting pairs in lexicographic order, at most `cap` of them.
    pub pairs: Vec<Conflict>,
    /// More conflicts existed than the cap allowed.
    pub overflow: bool,
}

impl ConflictReport {
    pub fn is_valid(&self) -> bool {
        self.pairs.is_empty() && !self.overflow
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictStrategy {
    /// Group vertices by weight and test distances inside each group.
    Bucketed,
    /// Materialize every r-neighbour pair and compare weights.
    Pairwise,
}

/// Conflicts of `c` at radius `r`, bucketed, capped at
/// [`DEFAULT_CONFLICT_CAP`].
pub fn find_conflicts(g: &Graph, c: &EdgeColouring, r: usize) -> Result<ConflictReport> {
    find_conflicts_with(g, &weight_profile(g, c).weights, r, ConflictStrategy::Bucketed, DEFAULT_CONFLICT_CAP)
}

/// Conflicts among the given per-vertex weights.
pub fn find_conflicts_with(
    g: &Graph,
    weights: &[u64],
    r: usize,
    strategy: ConflictStrategy,
    cap: usize,
) -> Result<ConflictReport> {
    check_radius(r)?;
    let mut pairs = Vec::new();
    let mut overflow = false;
    let mut push = |c: Conflict| {
        if pairs.len() < cap {
            pairs.push(c);
            true
        } else {
            overflow = true;
            false
        }
    };
    match strategy {
        ConflictStrategy::Pairwise => {
            for (u, v) in g.all_r_pairs(r)? {
                if weights[u] == weights[v] && !push(Conflict { u, v, weight: weights[u] }) {
                    break;
                }
            }
        }
        ConflictStrategy::Bucketed => {
            let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
            for (v, &w) in weights.iter().enumerate() {
                buckets.entry(w).or_default().push(v);
            }
            let mut bfs = Bfs::new(g.n());
            let mut mark = vec![false; g.n()];
            // vertices ascend, and so do bucket mates, giving lexicographic output
            'outer: for u in 0..g.n() {
                let bucket = &buckets[&weights[u]];
                let later = &bucket[bucket.partition_point(|&x| x <= u)..];
                if later.is_empty() {
                    continue;
                }
                let ball = bfs.ball(g, u, r);
                for &x in ball {
                    mark[x] = true;
                }
                let mut stop = false;
                for &v in later {
                    if mark[v] && !push(Conflict { u, v, weight: weights[u] }) {
                        stop = true;
                        break;
                    }
                }
                for &x in ball {
                    mark[x] = false;
                }
                if stop {
                    break 'outer;
                }
            }
        }
    }
    Ok(ConflictReport { pairs, overflow })
}

/// True iff every colour lies in `1..=k` and no two r-neighbours share a
/// weight.
pub fn is_r_irregular(g: &Graph, c: &EdgeColouring, r: usize, k: u64) -> bool {
    if c.colours().iter().any(|&x| x == 0 || x > k) {
        return false;
    }
    is_conflict_free(g, &weight_profile(g, c).weights, r)
}

pub(crate) fn is_conflict_free(g: &Graph, weights: &[u64], r: usize) -> bool {
    find_conflicts_with(g, weights, r, ConflictStrategy::Bucketed, 0)
        .map(|rep| rep.is_valid())
        .unwrap_or(false)
}

/// A colouring under edit, keeping weighted degrees current.
#[derive(Debug, Clone)]
pub struct IncrementalWeights<'g> {
    graph: &'g Graph,
    colours: Vec<u64>,
    weights: Vec<u64>,
}

impl<'g> IncrementalWeights<'g> {
    pub fn new(graph: &'g Graph, colours: Vec<u64>) -> Self {
        let weights = weights_of(graph, &colours);
        IncrementalWeights { graph, colours, weights }
    }

    pub fn colours(&self) -> &[u64] {
        &self.colours
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn colour(&self, e: usize) -> u64 {
        self.colours[e]
    }

    /// Sets edge `e` to `colour`; only its two endpoint weights move.
    pub fn set_colour(&mut self, e: usize, colour: u64) {
        let (u, v) = self.graph.edge(e);
        let old = self.colours[e];
        self.colours[e] = colour;
        for x in [u, v] {
            self.weights[x] = self.weights[x] - old + colour;
        }
    }

    pub fn add(&mut self, e: usize, delta: i64) {
        let c = self.colours[e] as i64 + delta;
        assert!(c >= 0, "colour of edge {e} would become negative");
        self.set_colour(e, c as u64);
    }

    pub fn into_colours(self) -> Vec<u64> {
        self.colours
    }
}
