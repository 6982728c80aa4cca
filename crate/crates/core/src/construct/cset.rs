//! The sparse edge set inside C: selection, residue adjustment and random
//! subtraction with the residue-spread check.

use std::collections::HashMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ordering::{OrderedPartition, Part};
use crate::error::{Error, Result};
use crate::graph::{BallCache, Graph};
use crate::rng::Rng;
use crate::verify::IncrementalWeights;

/// Edges with both ends in C, sorted by index, with per-vertex counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseCSet {
    pub edges: Vec<usize>,
    /// `degree[v]` is the number of set edges at `v`.
    pub degree: Vec<usize>,
}

impl SparseCSet {
    fn from_edges(g: &Graph, mut edges: Vec<usize>) -> SparseCSet {
        edges.sort_unstable();
        edges.dedup();
        let mut degree = vec![0; g.n()];
        for &e in &edges {
            let (u, v) = g.edge(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        SparseCSet { edges, degree }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// C-vertices whose count leaves `1..=d(v)/sparsity`.
    pub fn violations(&self, g: &Graph, part: &OrderedPartition, sparsity: f64) -> Vec<usize> {
        (0..g.n())
            .filter(|&v| part.label[v] == Part::C)
            .filter(|&v| {
                let k = self.degree[v];
                k < 1 || k as f64 > g.degree(v) as f64 / sparsity
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct CSetOutcome {
    pub set: SparseCSet,
    pub rounds: usize,
    /// Violating C-vertices after the last round; empty on success.
    pub violations: Vec<usize>,
}

impl CSetOutcome {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn c_edges(g: &Graph, part: &OrderedPartition, v: usize) -> Vec<usize> {
    g.adjacency(v).iter().filter(|&&(u, _)| part.label[u] == Part::C).map(|&(_, e)| e).collect()
}

/// Every C-vertex picks one incident C-C edge uniformly at random; the set
/// is the union of the picks. While some C-vertex has more than
/// `d(v)/sparsity` set edges, the picks of that vertex and its C-neighbours
/// are redrawn, up to `max_rounds` rounds.
pub fn select_sparse_cset(
    g: &Graph,
    part: &OrderedPartition,
    sparsity: f64,
    rng: &mut Rng,
    max_rounds: usize,
) -> Result<CSetOutcome> {
    let options: Vec<Vec<usize>> = (0..g.n())
        .map(|v| if part.label[v] == Part::C { c_edges(g, part, v) } else { Vec::new() })
        .collect();
    if let Some(v) = (0..g.n()).find(|&v| part.label[v] == Part::C && options[v].is_empty()) {
        return Err(Error::Precondition(format!("C-vertex {v} has no neighbour in C")));
    }
    let mut choice: Vec<Option<usize>> =
        options.iter().map(|o| (!o.is_empty()).then(|| o[rng.gen_range(0..o.len())])).collect();
    let build = |choice: &[Option<usize>]| SparseCSet::from_edges(g, choice.iter().flatten().copied().collect());
    let mut set = build(&choice);
    let mut violations = set.violations(g, part, sparsity);
    let mut rounds = 0;
    let mut mark = vec![false; g.n()];
    while !violations.is_empty() && rounds < max_rounds {
        rounds += 1;
        let mut redraw = Vec::new();
        for &v in &violations {
            for u in std::iter::once(v).chain(g.neighbours(v)) {
                if part.label[u] == Part::C && !mark[u] {
                    mark[u] = true;
                    redraw.push(u);
                }
            }
        }
        redraw.sort_unstable();
        for &u in &redraw {
            mark[u] = false;
            let o = &options[u];
            choice[u] = Some(o[rng.gen_range(0..o.len())]);
        }
        set = build(&choice);
        violations = set.violations(g, part, sparsity);
    }
    Ok(CSetOutcome { set, rounds, violations })
}

/// Smallest addition in `0..3` for the edge `uv` given which endpoints see
/// their last set edge here.
fn mod3_addition(wu: u64, wv: u64, last_u: bool, last_v: bool) -> Option<u64> {
    (0..3).find(|&a| (!last_u || (wu + a) % 3 != 0) && (!last_v || (wv + a) % 3 != 0))
}

fn mod3_pass(g: &Graph, w: &mut IncrementalWeights<'_>, order: &[usize], part: &OrderedPartition) -> Vec<(usize, u64)> {
    let mut remaining = vec![0usize; g.n()];
    for &e in order {
        let (u, v) = g.edge(e);
        remaining[u] += 1;
        remaining[v] += 1;
    }
    let mut added = Vec::with_capacity(order.len());
    for &e in order {
        let (u, v) = g.edge(e);
        remaining[u] -= 1;
        remaining[v] -= 1;
        let a = mod3_addition(w.weight(u), w.weight(v), remaining[u] == 0, remaining[v] == 0)
            .expect("two constraints forbid at most two of three residues");
        if a > 0 {
            w.add(e, a as i64);
        }
        added.push((e, a));
    }
    debug_assert!(order.iter().all(|&e| {
        let (u, v) = g.edge(e);
        part.label[u] == Part::C && part.label[v] == Part::C
    }));
    added
}

/// Adds 0, 1 or 2 to each set edge in index order so that every C-vertex
/// weight ends up nonzero mod 3: at the last set edge of an endpoint the
/// addition fixes that endpoint's residue. If some C-vertex is still
/// divisible by 3 the pass is undone and repeated in reverse order once.
/// Returns the additions per edge.
pub fn adjust_cset_mod3(
    g: &Graph,
    w: &mut IncrementalWeights<'_>,
    set: &SparseCSet,
    part: &OrderedPartition,
) -> Result<Vec<(usize, u64)>> {
    let bad = |w: &IncrementalWeights<'_>| {
        (0..g.n()).find(|&v| part.label[v] == Part::C && w.weight(v) % 3 == 0)
    };
    let added = mod3_pass(g, w, &set.edges, part);
    if bad(w).is_none() {
        return Ok(added);
    }
    for &(e, a) in &added {
        w.add(e, -(a as i64));
    }
    let reversed: Vec<usize> = set.edges.iter().rev().copied().collect();
    let added = mod3_pass(g, w, &reversed, part);
    match bad(w) {
        None => Ok(added),
        Some(v) => Err(Error::Precondition(format!("C-vertex {v} stays divisible by 3 after both passes"))),
    }
}

/// Parameters of the residue-spread check on C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadCheck {
    pub big_q: u64,
    /// Comparable degrees are within this factor.
    pub degree_ratio: f64,
    /// A residue class may hold at most `factor · d(v) / spread` vertices.
    pub factor: f64,
    pub spread: f64,
}

impl SpreadCheck {
    fn comparable(&self, dv: usize, du: usize) -> bool {
        let (dv, du) = (dv as f64, du as f64);
        dv / self.degree_ratio <= du && du <= dv * self.degree_ratio
    }

    fn limit(&self, dv: usize) -> f64 {
        self.factor * dv as f64 / self.spread
    }
}

/// A residue class `t` mod `Q` over-represented among the comparable
/// C-r-neighbours of `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadViolation {
    pub vertex: usize,
    pub residue: u64,
    pub count: usize,
}

/// Over-full residue classes for the given C-vertices, ascending by
/// `(vertex, residue)`.
pub fn spread_violations(
    g: &Graph,
    balls: &BallCache,
    part: &OrderedPartition,
    weights: &[u64],
    check: &SpreadCheck,
    vertices: &[usize],
) -> Vec<SpreadViolation> {
    let per_vertex: Vec<Vec<SpreadViolation>> = vertices
        .par_iter()
        .map(|&v| {
            let dv = g.degree(v);
            let mut counts: HashMap<u64, usize> = HashMap::new();
            for &u in balls.ball(v) {
                if part.label[u] == Part::C && check.comparable(dv, g.degree(u)) {
                    *counts.entry(weights[u] % check.big_q).or_default() += 1;
                }
            }
            let limit = check.limit(dv);
            let mut out: Vec<SpreadViolation> = counts
                .into_iter()
                .filter(|&(t, c)| t % 3 != 0 && c as f64 > limit)
                .map(|(t, c)| SpreadViolation { vertex: v, residue: t, count: c })
                .collect();
            out.sort_unstable_by_key(|x| x.residue);
            out
        })
        .collect();
    per_vertex.into_iter().flatten().collect()
}

#[derive(Debug, Clone)]
pub struct SubtractOutcome {
    /// Amount subtracted per set edge, aligned with `SparseCSet::edges`.
    pub subtracted: Vec<u64>,
    pub rounds: usize,
    /// Remaining violations; empty on success.
    pub violations: Vec<SpreadViolation>,
}

/// Subtracts an independent uniform multiple of 3 in `[0, Q-1]` from every
/// set edge, then redraws the subtractions feeding over-full residue
/// classes (the set edges at the comparable C-r-neighbours counted in the
/// class) until no class is over-full or `max_rounds` rounds have passed.
#[allow(clippy::too_many_arguments)]
pub fn random_subtract_cset(
    g: &Graph,
    balls: &BallCache,
    part: &OrderedPartition,
    w: &mut IncrementalWeights<'_>,
    set: &SparseCSet,
    check: &SpreadCheck,
    rng: &mut Rng,
    max_rounds: usize,
) -> Result<SubtractOutcome> {
    let steps = check.big_q / 3;
    if steps == 0 || check.big_q % 3 != 0 {
        return Err(Error::Argument(format!("Q = {} must be a positive multiple of 3", check.big_q)));
    }
    let draw = |rng: &mut Rng| 3 * rng.gen_range(0..steps);
    let mut subtracted = Vec::with_capacity(set.len());
    for &e in &set.edges {
        let s = draw(rng);
        w.add(e, -(s as i64));
        subtracted.push(s);
    }
    let c_vertices: Vec<usize> = (0..g.n()).filter(|&v| part.label[v] == Part::C).collect();
    let mut violations = spread_violations(g, balls, part, w.weights(), check, &c_vertices);
    let mut rounds = 0;
    let mut mark = vec![false; set.len()];
    let slot_of = |e: usize| set.edges.binary_search(&e).ok();
    while !violations.is_empty() && rounds < max_rounds {
        rounds += 1;
        let mut redraw = Vec::new();
        for viol in &violations {
            let v = viol.vertex;
            let dv = g.degree(v);
            for &u in balls.ball(v) {
                if part.label[u] != Part::C
                    || !check.comparable(dv, g.degree(u))
                    || w.weight(u) % check.big_q != viol.residue
                {
                    continue;
                }
                for &(_, e) in g.adjacency(u) {
                    if let Some(i) = slot_of(e) {
                        if !mark[i] {
                            mark[i] = true;
                            redraw.push(i);
                        }
                    }
                }
            }
        }
        redraw.sort_unstable();
        for &i in &redraw {
            mark[i] = false;
            let s = draw(rng);
            w.add(set.edges[i], subtracted[i] as i64 - s as i64);
            subtracted[i] = s;
        }
        violations = spread_violations(g, balls, part, w.weights(), check, &c_vertices);
    }
    Ok(SubtractOutcome { subtracted, rounds, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::rng;

    fn all_c(n: usize) -> OrderedPartition {
        OrderedPartition::from_samples(vec![0.99; n], 0.1, 0.1).unwrap()
    }

    #[test]
    fn single_edge_is_forced() {
        let g = path(2);
        let out = select_sparse_cset(&g, &all_c(2), 1.0, &mut rng::split(0, 2), 5).unwrap();
        assert!(out.ok());
        assert_eq!(out.set.edges, vec![0]);
        assert_eq!(out.set.degree, vec![1, 1]);
    }

    #[test]
    fn empty_c_is_vacuous() {
        let g = cycle(5);
        let part = OrderedPartition::from_samples(vec![0.5; 5], 0.1, 0.1).unwrap();
        let out = select_sparse_cset(&g, &part, 1.0, &mut rng::split(0, 2), 5).unwrap();
        assert!(out.ok() && out.set.is_empty());
    }

    #[test]
    fn c_vertex_without_c_neighbour_is_rejected() {
        let g = path(3);
        let part = OrderedPartition::from_samples(vec![0.99, 0.5, 0.99], 0.1, 0.1).unwrap();
        assert!(matches!(
            select_sparse_cset(&g, &part, 1.0, &mut rng::split(0, 2), 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn star_center_bound_is_enforced() {
        // K_{1,5} inside C: every leaf must pick its only edge, so the
        // center always has 5 set edges and each leaf 1; both fit iff te <= 1
        let g = star(5);
        let part = all_c(6);
        let ok = select_sparse_cset(&g, &part, 1.0, &mut rng::split(0, 2), 5).unwrap();
        assert!(ok.ok());
        assert_eq!(ok.set.degree[0], 5);
        let bad = select_sparse_cset(&g, &part, 1.25, &mut rng::split(0, 2), 5).unwrap();
        assert!(!bad.ok());
        assert_eq!(bad.violations, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(bad.rounds, 5);
    }

    #[test]
    fn mod3_single_edge() {
        let g = path(2);
        let mut w = IncrementalWeights::new(&g, vec![3]);
        let set = SparseCSet::from_edges(&g, vec![0]);
        let added = adjust_cset_mod3(&g, &mut w, &set, &all_c(2)).unwrap();
        assert_eq!(added, vec![(0, 1)]);
        assert!(w.weights().iter().all(|x| x % 3 != 0));
    }

    #[test]
    fn mod3_path_all_start_residues() {
        // two-edge path with arbitrary starting colours
        let g = path(3);
        let set = SparseCSet::from_edges(&g, vec![0, 1]);
        for c0 in 3..6 {
            for c1 in 3..6 {
                let mut w = IncrementalWeights::new(&g, vec![c0, c1]);
                adjust_cset_mod3(&g, &mut w, &set, &all_c(3)).unwrap();
                assert!(w.weights().iter().all(|x| x % 3 != 0), "{c0} {c1}");
            }
        }
    }

    #[test]
    fn subtraction_support() {
        let g = path(2);
        let check = SpreadCheck { big_q: 9, degree_ratio: 10.0, factor: 100.0, spread: 1.0 };
        let set = SparseCSet::from_edges(&g, vec![0]);
        let mut seen = [0usize; 9];
        let mut rng = rng::split(4, 3);
        for _ in 0..3000 {
            let mut w = IncrementalWeights::new(&g, vec![20]);
            let out = random_subtract_cset(&g, &BallCache::build(&g, 2).unwrap(), &all_c(2), &mut w, &set, &check, &mut rng, 0)
                .unwrap();
            seen[out.subtracted[0] as usize] += 1;
            assert_eq!(w.colour(0), 20 - out.subtracted[0]);
        }
        for (s, &k) in seen.iter().enumerate() {
            if s % 3 == 0 {
                assert!((850..1150).contains(&k), "{s}: {k}");
            } else {
                assert_eq!(k, 0);
            }
        }
    }

    #[test]
    fn spread_counts_residue_classes() {
        // K4 all in C, Q = 9: weights 1, 10, 19, 2 give class 1 three
        // members in the ball of vertex 3
        let g = complete(4);
        let balls = BallCache::build(&g, 2).unwrap();
        let check = SpreadCheck { big_q: 9, degree_ratio: 2.0, factor: 2.0, spread: 3.0 };
        let v = spread_violations(&g, &balls, &all_c(4), &[1, 10, 19, 2], &check, &[0, 1, 2, 3]);
        // limit 2·3/3 = 2: only vertex 3 sees three members of class 1
        assert_eq!(v, vec![SpreadViolation { vertex: 3, residue: 1, count: 3 }]);
    }
}
