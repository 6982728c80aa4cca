#![allow(dead_code)]

//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles only use `Graph::edges` and plain loops, never the crate's own
//! ball or conflict code.

use distirr::Graph;
use proptest::prelude::*;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, e).unwrap()
}

/// Graph on `n` vertices whose edges are the set bits of `mask` over the
/// pairs `(u, v)`, `u < v`, in lexicographic order.
pub fn from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random graph on `n` vertices with a random edge density.
pub fn random_graph(rng: &mut impl rand::Rng, n: usize) -> Graph {
    let density: f64 = rng.gen();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Random simple graph with `1..=max_n` vertices.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let bits = pair_count(n);
        let max = if bits == 0 { 1 } else { 1u64 << bits };
        (Just(n), 0..max).prop_map(|(n, mask)| from_mask(n, mask))
    })
}

/// Random graph with at least one edge and no isolated edge: isolated
/// edges of a random graph are dropped.
pub fn arb_defined_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n)
        .prop_map(|g| {
            let keep: Vec<(usize, usize)> =
                g.edges().iter().copied().filter(|&(u, v)| g.degree(u) > 1 || g.degree(v) > 1).collect();
            Graph::from_edges(g.n(), keep).unwrap()
        })
        .prop_filter("needs an edge", |g| g.m() > 0)
}

/// Random graph with `2..=max_n` vertices and at most `max_m` edges, no
/// isolated edge and at least one edge.
pub fn arb_sparse_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(move |n| (Just(n), proptest::collection::vec(0..pair_count(n), 1..=max_m)))
        .prop_map(|(n, bits)| from_mask(n, bits.iter().fold(0u64, |m, &b| m | 1 << b)))
        .prop_filter("needs a defined instance", |g| g.m() > 0 && !g.has_isolated_edge())
}

/// All-pairs distances by Floyd–Warshall; `None` is infinity.
pub fn apsp(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Weights by summing over the edge list.
pub fn naive_weights(g: &Graph, colours: &[u64]) -> Vec<u64> {
    let mut w = vec![0; g.n()];
    for (&(u, v), &c) in g.edges().iter().zip(colours) {
        w[u] += c;
        w[v] += c;
    }
    w
}

/// Conflicting pairs `(u, v, weight)`, `u < v`, lexicographic, by a double
/// loop over all vertex pairs with a distance filter.
pub fn naive_conflicts(g: &Graph, dist: &[Vec<Option<usize>>], weights: &[u64], r: usize) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if dist[u][v].is_some_and(|d| d <= r) && weights[u] == weights[v] {
                out.push((u, v, weights[u]));
            }
        }
    }
    out
}

/// Literal enumeration of all `k^m` colourings; true iff one is r-distant
/// irregular.
pub fn brute_force_feasible(g: &Graph, r: usize, k: u64) -> bool {
    let dist = apsp(g);
    let m = g.m();
    let mut colours = vec![1u64; m];
    loop {
        let w = naive_weights(g, &colours);
        if naive_conflicts(g, &dist, &w, r).is_empty() {
            return true;
        }
        let mut i = 0;
        while i < m && colours[i] == k {
            colours[i] = 1;
            i += 1;
        }
        if i == m {
            return false;
        }
        colours[i] += 1;
    }
}

/// Least `k <= k_max` found by literal enumeration.
pub fn brute_force_strength(g: &Graph, r: usize, k_max: u64) -> Option<u64> {
    (1..=k_max).find(|&k| brute_force_feasible(g, r, k))
}
