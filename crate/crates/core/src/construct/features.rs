//! The six per-vertex ordering features and local resampling until all of
//! them hold.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ordering::{check_thresholds, sample_ordering, OrderedPartition, Part};
use super::profile::Thresholds;
use crate::error::Result;
use crate::graph::{BallCache, Bfs, Graph};
use crate::rng::Rng;

pub const FEATURES: usize = 6;

/// Constants the feature inequalities are evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub thresholds: Thresholds,
    /// `Δ^(r-1)`.
    pub power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VertexFeatures {
    /// r-neighbours in A.
    pub d_a_r: usize,
    /// r-neighbours in C.
    pub d_c_r: usize,
    pub d_a: usize,
    pub d_c: usize,
    /// Neighbours preceding the vertex.
    pub d_back: usize,
    /// r-neighbours preceding the vertex.
    pub d_back_r: usize,
    /// `holds[i]` is feature `F(i+1)`.
    pub holds: [bool; FEATURES],
}

impl VertexFeatures {
    pub fn ok(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub vertices: Vec<VertexFeatures>,
    pub ok: bool,
}

impl FeatureReport {
    /// `(vertex, feature index 0..6)` for every failed inequality.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, f) in self.vertices.iter().enumerate() {
            for i in 0..FEATURES {
                if !f.holds[i] {
                    out.push((v, i));
                }
            }
        }
        out
    }

    pub fn violation_counts(&self) -> [usize; FEATURES] {
        let mut c = [0; FEATURES];
        for f in &self.vertices {
            for i in 0..FEATURES {
                c[i] += !f.holds[i] as usize;
            }
        }
        c
    }

    pub fn violated_vertices(&self) -> usize {
        self.vertices.iter().filter(|f| !f.ok()).count()
    }
}

/// Evaluates F1..F6 for one vertex verbatim.
pub fn vertex_features(g: &Graph, balls: &BallCache, part: &OrderedPartition, cfg: &FeatureConfig, v: usize) -> VertexFeatures {
    let t = &cfg.thresholds;
    let d = g.degree(v) as f64;
    let dd = d * cfg.power;
    let mut f = VertexFeatures::default();
    for &u in balls.ball(v) {
        match part.label[u] {
            Part::A => f.d_a_r += 1,
            Part::C => f.d_c_r += 1,
            Part::B => {}
        }
        f.d_back_r += part.precedes(u, v) as usize;
    }
    for u in g.neighbours(v) {
        match part.label[u] {
            Part::A => f.d_a += 1,
            Part::C => f.d_c += 1,
            Part::B => {}
        }
        f.d_back += part.precedes(u, v) as usize;
    }
    let (ta, tc) = (t.a_fraction, t.c_gap);
    let within = |x: usize, lo: f64, hi: f64| lo <= x as f64 && x as f64 <= hi;
    f.holds[0] = f.d_a_r as f64 <= t.f1_upper * dd * ta;
    f.holds[1] = f.d_c_r as f64 <= t.f2_upper * dd * tc;
    f.holds[2] = within(f.d_a, t.f3_lower * d * ta, t.f3_upper * d * ta);
    f.holds[3] = within(f.d_c, t.f4_lower * d * tc, t.f4_upper * d * tc);
    let in_b = part.label[v] == Part::B;
    let xv = part.x[v];
    f.holds[4] = !in_b || f.d_back as f64 >= xv * d - (xv * d).sqrt() * t.deviation;
    f.holds[5] = !in_b || f.d_back_r as f64 <= xv * dd + (xv * dd).sqrt() * t.deviation;
    f
}

pub fn check_features(g: &Graph, balls: &BallCache, part: &OrderedPartition, cfg: &FeatureConfig) -> FeatureReport {
    let vertices: Vec<VertexFeatures> = (0..g.n())
        .into_par_iter()
        .map(|v| vertex_features(g, balls, part, cfg, v))
        .collect();
    let ok = vertices.iter().all(VertexFeatures::ok);
    FeatureReport { vertices, ok }
}

/// Successful resampling run.
#[derive(Debug, Clone)]
pub struct Resampled {
    pub partition: OrderedPartition,
    pub report: FeatureReport,
    /// Resampling rounds performed after the initial draw.
    pub rounds: usize,
    /// Violated vertices before each round, starting with the initial draw.
    pub history: Vec<usize>,
    /// Initial violation counts per feature.
    pub initial_counts: [usize; FEATURES],
}

#[derive(Debug, Clone)]
pub struct FeatureFailure {
    pub partition: OrderedPartition,
    pub report: FeatureReport,
    pub rounds: usize,
    pub history: Vec<usize>,
    pub initial_counts: [usize; FEATURES],
}

/// Vertices whose samples a violated feature of `v` depends on: the open
/// r-ball for F1/F2, the closed r-ball for F6, the open neighbourhood for
/// F3/F4 and the closed one for F5.
fn event_variables(g: &Graph, balls: &BallCache, v: usize, feature: usize, out: &mut Vec<usize>) {
    match feature {
        0 | 1 => out.extend_from_slice(balls.ball(v)),
        5 => {
            out.extend_from_slice(balls.ball(v));
            out.push(v);
        }
        2 | 3 => out.extend(g.neighbours(v)),
        _ => {
            out.extend(g.neighbours(v));
            out.push(v);
        }
    }
}

/// Moser-Tardos style resampling: draw an ordering, and while some feature
/// fails, redraw the samples of every violated event and re-check the
/// vertices within distance r of a redrawn sample (which are exactly the
/// events sharing a variable with it, all within distance 2r of the
/// violation). Gives up after `max_rounds` redraw rounds.
pub fn resample_until_features(
    g: &Graph,
    balls: &BallCache,
    rng: &mut Rng,
    cfg: &FeatureConfig,
    max_rounds: usize,
) -> Result<std::result::Result<Resampled, FeatureFailure>> {
    let t = &cfg.thresholds;
    check_thresholds(t.a_fraction, t.c_gap)?;
    let mut part = sample_ordering(g, rng, t.a_fraction, t.c_gap)?;
    let mut report = check_features(g, balls, &part, cfg);
    let initial_counts = report.violation_counts();
    let mut history = vec![report.violated_vertices()];
    let mut bfs = Bfs::new(g.n());
    let mut mark = vec![false; g.n()];
    let mut rounds = 0;
    let mut vars = Vec::new();
    let mut redrawn = Vec::new();
    while !report.ok {
        if rounds == max_rounds {
            return Ok(Err(FeatureFailure { partition: part, report, rounds, history, initial_counts }));
        }
        rounds += 1;
        redrawn.clear();
        for (v, i) in report.violations() {
            vars.clear();
            event_variables(g, balls, v, i, &mut vars);
            for &u in &vars {
                if !mark[u] {
                    mark[u] = true;
                    redrawn.push(u);
                }
            }
        }
        redrawn.sort_unstable();
        for &u in &redrawn {
            part.x[u] = rng.gen::<f64>();
            mark[u] = false;
        }
        part.refresh();
        let affected = bfs.multi_ball(g, redrawn.iter().copied(), balls.radius()).to_vec();
        let fresh: Vec<(usize, VertexFeatures)> = affected
            .par_iter()
            .map(|&v| (v, vertex_features(g, balls, &part, cfg, v)))
            .collect();
        for (v, f) in fresh {
            report.vertices[v] = f;
        }
        report.ok = report.vertices.iter().all(VertexFeatures::ok);
        history.push(report.violated_vertices());
    }
    Ok(Ok(Resampled { partition: part, report, rounds, history, initial_counts }))
}
