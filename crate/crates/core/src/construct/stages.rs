//! The colouring stages run over a fixed ordering: A, B, the residue
//! adjustment and random subtraction on the sparse C-set, moving B-vertices
//! to their lower pair element, and C.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::cset::{adjust_cset_mod3, random_subtract_cset, SparseCSet, SpreadCheck, SpreadViolation, SubtractOutcome};
use super::ordering::{OrderedPartition, Part};
use super::palette::PaletteParams;
use crate::error::{Error, Result};
use crate::graph::{BallCache, Graph};
use crate::rng::Rng;
use crate::verify::IncrementalWeights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Init,
    ADone,
    BDone,
    EPrimeDone,
    BFixed,
    CDone,
}

/// A vertex a stage could not place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub vertex: Option<usize>,
    pub detail: String,
}

impl StageFailure {
    fn blocked(stage: &str, v: usize, detail: String) -> Self {
        StageFailure { stage: stage.into(), vertex: Some(v), detail }
    }
}

/// Base of the pair `{p, p + Q}` holding `s`, where pairs partition the
/// integers and `p mod 2Q < Q`.
pub fn pair_base(s: u64, big_q: u64) -> u64 {
    if s % (2 * big_q) >= big_q {
        s - big_q
    } else {
        s
    }
}

/// Offsets `0, 1, -1, 2, -2, ...` restricted to `[-down, up]`.
fn offsets(up: usize, down: usize) -> impl Iterator<Item = i64> {
    let reach = up.max(down) as i64;
    (0..=reach)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .filter(move |&m| m <= up as i64 && -m <= down as i64)
}

/// Per-stage counters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounters {
    pub processed: usize,
    /// Vertices whose sum moved by at least one `±Q` toggle.
    pub toggled: usize,
    pub forward_added: u64,
    pub blocked: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageStats {
    pub a: StageCounters,
    pub b: StageCounters,
    pub c: StageCounters,
    pub b_fixed: usize,
    pub subtraction_rounds: usize,
}

/// Colouring in progress with the pair assigned to each processed vertex.
#[derive(Debug, Clone)]
pub struct ConstructState<'g> {
    graph: &'g Graph,
    balls: &'g BallCache,
    pub palette: PaletteParams,
    pub partition: OrderedPartition,
    weights: IncrementalWeights<'g>,
    /// Base `p` of the pair `{p, p + Q}` assigned to each vertex.
    pub pairs: Vec<Option<u64>>,
    pub assigned_stage: Vec<Option<Part>>,
    pub e_prime: SparseCSet,
    pub stage: Stage,
    pub stats: StageStats,
    c_done: Vec<bool>,
}

impl<'g> ConstructState<'g> {
    /// Every edge starts at `Q + q`.
    pub fn new(graph: &'g Graph, balls: &'g BallCache, palette: PaletteParams, partition: OrderedPartition) -> Self {
        let colours = vec![palette.initial_colour(); graph.m()];
        ConstructState {
            graph,
            balls,
            palette,
            partition,
            weights: IncrementalWeights::new(graph, colours),
            pairs: vec![None; graph.n()],
            assigned_stage: vec![None; graph.n()],
            e_prime: SparseCSet::default(),
            stage: Stage::Init,
            stats: StageStats::default(),
            c_done: vec![false; graph.n()],
        }
    }

    pub fn colours(&self) -> &[u64] {
        self.weights.colours()
    }

    pub fn weights(&self) -> &[u64] {
        self.weights.weights()
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights.weight(v)
    }

    pub fn into_colours(self) -> Vec<u64> {
        self.weights.into_colours()
    }

    fn expect_stage(&self, want: Stage, op: &str) -> Result<()> {
        if self.stage == want {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{op} needs stage {want:?}, state is at {:?}", self.stage)))
        }
    }

    fn big_q(&self) -> u64 {
        self.palette.big_q
    }

    /// `+Q` when the earlier endpoint `u` sits on its lower element, else
    /// `-Q`, so `u` stays inside its pair.
    fn toggle_direction(&self, u: usize) -> i64 {
        let base = self.pairs[u].expect("toggled endpoint has a pair");
        if self.weight(u) == base {
            self.big_q() as i64
        } else {
            -(self.big_q() as i64)
        }
    }

    /// Splits the edges at `v` that may toggle into `(up, down)` lists by
    /// direction, ascending by edge index.
    fn toggles<F>(&self, v: usize, usable: F) -> (Vec<usize>, Vec<usize>)
    where
        F: Fn(usize) -> bool,
    {
        let mut up = Vec::new();
        let mut down = Vec::new();
        let mut adj: Vec<(usize, usize)> = self.graph.adjacency(v).to_vec();
        adj.sort_unstable_by_key(|&(_, e)| e);
        for (u, e) in adj {
            if usable(u) {
                if self.toggle_direction(u) > 0 {
                    up.push(e);
                } else {
                    down.push(e);
                }
            }
        }
        (up, down)
    }

    fn apply_toggles(&mut self, m: i64, up: &[usize], down: &[usize]) {
        let q = self.big_q() as i64;
        let (list, delta) = if m > 0 { (up, q) } else { (down, -q) };
        for &e in &list[..m.unsigned_abs() as usize] {
            self.weights.add(e, delta);
        }
    }

    /// Places one A- or B-vertex: picks the first reachable sum, by
    /// `(|m|, f)` with `m` backward toggles and `f` forward additions, whose
    /// pair avoids every backward r-neighbour's pair (and has base divisible
    /// by 3 in stage A). Returns false when none exists; the vertex then
    /// keeps its sum and takes that sum's pair.
    fn place_ordered(&mut self, v: usize, part: Part) -> bool {
        let q = self.palette.small_q;
        let big_q = self.big_q();
        let precedes = |u: usize| self.partition.precedes(u, v);
        let blocked: HashSet<u64> =
            self.balls.ball(v).iter().filter(|&&u| precedes(u)).filter_map(|&u| self.pairs[u]).collect();
        let (up, down) = self.toggles(v, precedes);
        let mut forward: Vec<usize> =
            self.graph.adjacency(v).iter().filter(|&&(u, _)| !precedes(u)).map(|&(_, e)| e).collect();
        forward.sort_unstable();
        let span = forward.len() as u64 * q;
        let s0 = self.weight(v) as i64;
        let mut choice = None;
        'search: for m in offsets(up.len(), down.len()) {
            for f in 0..=span {
                let s = (s0 + m * big_q as i64) as u64 + f;
                let base = pair_base(s, big_q);
                if (part == Part::A && base % 3 != 0) || blocked.contains(&base) {
                    continue;
                }
                choice = Some((m, f, base));
                break 'search;
            }
        }
        let counters = if part == Part::A { &mut self.stats.a } else { &mut self.stats.b };
        counters.processed += 1;
        let Some((m, f, base)) = choice else {
            counters.blocked += 1;
            self.pairs[v] = Some(pair_base(self.weight(v), big_q));
            self.assigned_stage[v] = Some(part);
            return false;
        };
        counters.toggled += (m != 0) as usize;
        counters.forward_added += f;
        self.apply_toggles(m, &up, &down);
        let mut rest = f;
        for &e in &forward {
            if rest == 0 {
                break;
            }
            let a = rest.min(q);
            self.weights.add(e, a as i64);
            rest -= a;
        }
        self.pairs[v] = Some(base);
        self.assigned_stage[v] = Some(part);
        true
    }

    fn run_ordered(&mut self, part: Part, from: Stage, to: Stage, name: &str) -> Result<Vec<StageFailure>> {
        self.expect_stage(from, name)?;
        let mut failures = Vec::new();
        for v in self.partition.members(part) {
            if !self.place_ordered(v, part) {
                failures.push(StageFailure::blocked(name, v, "no admissible pair among reachable sums".into()));
            }
        }
        if failures.is_empty() {
            self.stage = to;
        }
        Ok(failures)
    }

    /// Stage A. Advances to `ADone` only when every A-vertex was placed.
    pub fn run_stage_a(&mut self) -> Result<Vec<StageFailure>> {
        self.run_ordered(Part::A, Stage::Init, Stage::ADone, "stage_a")
    }

    pub fn run_stage_b(&mut self) -> Result<Vec<StageFailure>> {
        self.run_ordered(Part::B, Stage::ADone, Stage::BDone, "stage_b")
    }

    /// Residue adjustment on `set` followed by the random subtraction with
    /// its spread check. Advances to `EPrimeDone` only when the check
    /// passes.
    pub fn run_cset(
        &mut self,
        set: SparseCSet,
        check: &SpreadCheck,
        rng: &mut Rng,
        max_rounds: usize,
    ) -> Result<(SubtractOutcome, Vec<StageFailure>)> {
        self.expect_stage(Stage::BDone, "cset")?;
        adjust_cset_mod3(self.graph, &mut self.weights, &set, &self.partition)?;
        let out =
            random_subtract_cset(self.graph, self.balls, &self.partition, &mut self.weights, &set, check, rng, max_rounds)?;
        self.e_prime = set;
        self.stats.subtraction_rounds = out.rounds;
        let failures: Vec<StageFailure> = out
            .violations
            .iter()
            .map(|&SpreadViolation { vertex, residue, count }| {
                StageFailure::blocked("subtraction", vertex, format!("residue {residue} held by {count} vertices"))
            })
            .collect();
        if failures.is_empty() {
            self.stage = Stage::EPrimeDone;
        }
        Ok((out, failures))
    }

    /// Moves every B-vertex on its upper pair element down by `Q` through
    /// its lowest-index edge into C.
    pub fn fix_b_to_lower(&mut self) -> Result<Vec<StageFailure>> {
        self.expect_stage(Stage::EPrimeDone, "fix_b_to_lower")?;
        let big_q = self.big_q() as i64;
        let mut failures = Vec::new();
        for v in self.partition.members(Part::B) {
            let base = self.pairs[v].expect("B-vertex has a pair");
            if self.weight(v) == base {
                continue;
            }
            let edge = self
                .graph
                .adjacency(v)
                .iter()
                .filter(|&&(u, _)| self.partition.label[u] == Part::C)
                .map(|&(_, e)| e)
                .min();
            match edge {
                Some(e) => {
                    self.weights.add(e, -big_q);
                    self.stats.b_fixed += 1;
                }
                None => failures.push(StageFailure::blocked("fix_b", v, "no edge into C".into())),
            }
        }
        if failures.is_empty() {
            self.stage = Stage::BFixed;
        }
        Ok(failures)
    }

    /// Places one C-vertex by toggling its A-edges, avoiding the sums of
    /// processed C-r-neighbours and of B-r-neighbours.
    fn place_c(&mut self, v: usize) -> bool {
        let label = &self.partition.label;
        let blocked: HashSet<u64> = self
            .balls
            .ball(v)
            .iter()
            .filter(|&&u| label[u] == Part::B || (label[u] == Part::C && self.c_done[u]))
            .map(|&u| self.weight(u))
            .collect();
        let (up, down) = self.toggles(v, |u| label[u] == Part::A);
        let s0 = self.weight(v) as i64;
        let big_q = self.big_q() as i64;
        let choice = offsets(up.len(), down.len()).find(|&m| !blocked.contains(&((s0 + m * big_q) as u64)));
        self.stats.c.processed += 1;
        self.c_done[v] = true;
        match choice {
            Some(m) => {
                self.stats.c.toggled += (m != 0) as usize;
                self.apply_toggles(m, &up, &down);
                true
            }
            None => {
                self.stats.c.blocked += 1;
                false
            }
        }
    }

    pub fn run_stage_c(&mut self) -> Result<Vec<StageFailure>> {
        self.expect_stage(Stage::BFixed, "stage_c")?;
        let mut failures = Vec::new();
        for v in self.partition.members(Part::C) {
            if !self.place_c(v) {
                failures.push(StageFailure::blocked("stage_c", v, "every toggle sum is taken".into()));
            }
        }
        if failures.is_empty() {
            self.stage = Stage::CDone;
        }
        Ok(failures)
    }

    /// Violated invariants for the current stage, at most `cap` messages:
    /// colour range `[q, 2Q + 2q]`, pair membership, A-sums divisible by 3,
    /// C-sums not divisible by 3 once the C-set is adjusted, B-sums on the
    /// lower element once fixed, and distinct pairs for r-neighbours in A∪B.
    pub fn invariant_violations(&self, cap: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |s: String| {
            if out.len() < cap {
                out.push(s);
            }
        };
        let (lo, hi) = (self.palette.min_colour(), self.palette.k_total);
        for (e, &c) in self.colours().iter().enumerate() {
            if c < lo || c > hi {
                push(format!("edge {e} colour {c} outside [{lo}, {hi}]"));
            }
        }
        let big_q = self.big_q();
        let label = &self.partition.label;
        for v in 0..self.graph.n() {
            let w = self.weight(v);
            if let Some(p) = self.pairs[v] {
                if w != p && w != p + big_q {
                    push(format!("vertex {v} weight {w} left its pair {{{p}, {}}}", p + big_q));
                }
                if self.stage >= Stage::BFixed && label[v] == Part::B && w != p {
                    push(format!("B-vertex {v} not on its lower element"));
                }
            }
            if label[v] == Part::A && self.pairs[v].is_some() && w % 3 != 0 {
                push(format!("A-vertex {v} weight {w} not divisible by 3"));
            }
            if label[v] == Part::C && self.stage >= Stage::EPrimeDone && w % 3 == 0 {
                push(format!("C-vertex {v} weight {w} divisible by 3"));
            }
            if let Some(p) = self.pairs[v] {
                for &u in self.balls.ball(v) {
                    if u > v && self.pairs[u] == Some(p) {
                        push(format!("r-neighbours {v} and {u} share pair base {p}"));
                    }
                }
            }
        }
        out
    }
}
