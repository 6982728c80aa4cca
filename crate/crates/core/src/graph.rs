//! Simple undirected graphs with dense vertex ids, plus distance and r-ball
//! queries.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest-path distance; `Infinite` when the endpoints lie in different
/// components. Orders every finite distance below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn is_within(self, r: usize) -> bool {
        matches!(self, Distance::Finite(d) if d <= r)
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Every edge has a stable index in `0..m`; adjacency lists hold
/// `(neighbour, edge index)` sorted by neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    max_degree: usize,
    min_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge sequence. Edge indices follow the input
    /// order; each edge is stored with its smaller endpoint first.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::Argument(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::Argument(format!("parallel edge {}-{}", e.0, e.1)));
            }
            list.push(e);
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in list.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        let min_degree = adj.iter().map(Vec::len).min().unwrap_or(0);
        Ok(Graph { n, edges: list, adj, max_degree, min_degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbour, edge index)` pairs of `v`.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn is_regular(&self) -> bool {
        self.n > 0 && self.max_degree == self.min_degree
    }

    /// Index of the edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Breadth-first distances from `src` to every vertex.
    pub fn distances_from(&self, src: usize) -> Result<Vec<Distance>> {
        self.check_vertex(src)?;
        let mut dist = vec![Distance::Infinite; self.n];
        dist[src] = Distance::Finite(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].finite().unwrap();
            for w in self.neighbours(u) {
                if dist[w] == Distance::Infinite {
                    dist[w] = Distance::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Distance> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Distance::Finite(0));
        }
        let mut bfs = Bfs::new(self.n);
        Ok(bfs.distance(self, u, v))
    }

    /// Vertices at distance `1..=r` from `v`.
    pub fn r_ball(&self, v: usize, r: usize) -> Result<RBall> {
        self.check_vertex(v)?;
        check_radius(r)?;
        let mut bfs = Bfs::new(self.n);
        let mut members = bfs.ball(self, v, r).to_vec();
        members.sort_unstable();
        Ok(RBall { center: v, radius: r, members })
    }

    /// Every unordered pair `(u, v)`, `u < v`, with `1 <= dist(u, v) <= r`,
    /// in lexicographic order.
    pub fn all_r_pairs(&self, r: usize) -> Result<Vec<(usize, usize)>> {
        check_radius(r)?;
        let mut bfs = Bfs::new(self.n);
        let mut pairs = Vec::new();
        for u in 0..self.n {
            let mut later: Vec<usize> = bfs.ball(self, u, r).iter().copied().filter(|&w| w > u).collect();
            later.sort_unstable();
            pairs.extend(later.into_iter().map(|w| (u, w)));
        }
        Ok(pairs)
    }

    /// True iff some edge has both endpoints of degree one.
    pub fn has_isolated_edge(&self) -> bool {
        self.isolated_edge().is_some()
    }

    pub fn isolated_edge(&self) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .find(|&(u, v)| self.degree(u) == 1 && self.degree(v) == 1)
    }

    pub(crate) fn require_no_isolated_edge(&self) -> Result<()> {
        match self.isolated_edge() {
            Some((u, v)) => Err(Error::IsolatedEdge(u, v)),
            None => Ok(()),
        }
    }

    /// Largest finite or infinite eccentricity; `Finite(0)` for n <= 1.
    pub fn diameter(&self) -> Distance {
        let mut best = Distance::Finite(0);
        for v in 0..self.n {
            let d = self.distances_from(v).expect("valid vertex");
            if let Some(&m) = d.iter().max() {
                best = best.max(m);
            }
        }
        best
    }
}

pub(crate) fn check_radius(r: usize) -> Result<()> {
    if r < 1 {
        Err(Error::Radius(r))
    } else {
        Ok(())
    }
}

/// The open r-neighbourhood of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RBall {
    pub center: usize,
    pub radius: usize,
    /// Sorted ids of the vertices at distance `1..=radius`.
    pub members: Vec<usize>,
}

impl RBall {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Reusable scratch space for depth-bounded breadth-first searches.
#[derive(Debug, Clone)]
pub struct Bfs {
    stamp: Vec<u32>,
    depth: Vec<u32>,
    epoch: u32,
    out: Vec<usize>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs { stamp: vec![0; n], depth: vec![0; n], epoch: 0, out: Vec::new() }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Vertices at distance `1..=radius` from `center`, in BFS order.
    pub fn ball(&mut self, g: &Graph, center: usize, radius: usize) -> &[usize] {
        self.multi_ball(g, std::iter::once(center), radius);
        // drop the center, which is the first entry
        &self.out[1..]
    }

    /// All vertices within distance `radius` of any source (sources
    /// included), in BFS order.
    pub fn multi_ball<I>(&mut self, g: &Graph, sources: I, radius: usize) -> &[usize]
    where
        I: IntoIterator<Item = usize>,
    {
        self.next_epoch();
        self.out.clear();
        for s in sources {
            if self.stamp[s] != self.epoch {
                self.stamp[s] = self.epoch;
                self.depth[s] = 0;
                self.out.push(s);
            }
        }
        let mut head = 0;
        while head < self.out.len() {
            let u = self.out[head];
            head += 1;
            let du = self.depth[u] as usize;
            if du == radius {
                continue;
            }
            for &(w, _) in g.adjacency(u) {
                if self.stamp[w] != self.epoch {
                    self.stamp[w] = self.epoch;
                    self.depth[w] = du as u32 + 1;
                    self.out.push(w);
                }
            }
        }
        &self.out
    }

    /// Distance between `u` and `v`, stopping as soon as `v` is reached.
    pub fn distance(&mut self, g: &Graph, u: usize, v: usize) -> Distance {
        if u == v {
            return Distance::Finite(0);
        }
        self.next_epoch();
        self.out.clear();
        self.stamp[u] = self.epoch;
        self.depth[u] = 0;
        self.out.push(u);
        let mut head = 0;
        while head < self.out.len() {
            let x = self.out[head];
            head += 1;
            for &(w, _) in g.adjacency(x) {
                if self.stamp[w] != self.epoch {
                    self.stamp[w] = self.epoch;
                    self.depth[w] = self.depth[x] + 1;
                    if w == v {
                        return Distance::Finite(self.depth[w] as usize);
                    }
                    self.out.push(w);
                }
            }
        }
        Distance::Infinite
    }
}

/// All open r-balls of a graph, stored contiguously. Built once per
/// `(graph, r)` and shared read-only afterwards.
#[derive(Debug, Clone)]
pub struct BallCache {
    radius: usize,
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl BallCache {
    pub fn build(g: &Graph, r: usize) -> Result<BallCache> {
        check_radius(r)?;
        let mut bfs = Bfs::new(g.n());
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut members = Vec::new();
        offsets.push(0);
        for v in 0..g.n() {
            let start = members.len();
            members.extend_from_slice(bfs.ball(g, v, r));
            members[start..].sort_unstable();
            offsets.push(members.len());
        }
        Ok(BallCache { radius: r, offsets, members })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Sorted r-ball members of `v`.
    pub fn ball(&self, v: usize) -> &[usize] {
        &self.members[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn contains(&self, v: usize, u: usize) -> bool {
        self.ball(v).binary_search(&u).is_ok()
    }
}
