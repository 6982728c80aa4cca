use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::cset::{select_sparse_cset, SpreadCheck};
use super::features::{resample_until_features, FeatureConfig, FEATURES};
use super::ordering::Part;
use super::palette::PaletteParams;
use super::profile::{ThresholdProfile, Thresholds};
use super::stages::{ConstructState, Stage, StageFailure, StageStats};
use crate::error::Result;
use crate::graph::{check_radius, BallCache, Graph};
use crate::rng::{self, stream};
use crate::verify::{check_capacity, is_r_irregular, EdgeColouring};

/// Failure records kept per run; further ones are only counted.
const FAILURE_CAP: usize = 1000;
const INVARIANT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructConfig {
    pub r: usize,
    pub seed: u64,
    pub profile: ThresholdProfile,
    /// Round budget of each resampling loop.
    pub max_rounds: usize,
    /// Check stage invariants at every boundary.
    pub check_invariants: bool,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            r: 2,
            seed: 0,
            profile: ThresholdProfile::Custom(Thresholds::desk()),
            max_rounds: 50,
            check_invariants: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRounds {
    pub features: usize,
    pub sparse_set: usize,
    pub subtraction: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartSizes {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// Invariant check at one stage boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub stage: Stage,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(rename = "Q")]
    pub big_q: u64,
    #[serde(rename = "q")]
    pub small_q: u64,
    pub k_total: u64,
    pub seed: u64,
    pub profile: String,
    pub thresholds: Thresholds,
    pub stage_rounds: StageRounds,
    /// Violated vertices before each feature resampling round.
    pub feature_history: Vec<usize>,
    /// Violations of F1..F6 in the first ordering drawn.
    pub initial_feature_violations: [usize; FEATURES],
    pub parts: PartSizes,
    pub e_prime_edges: usize,
    pub stats: StageStats,
    /// Last stage completed.
    pub reached: Stage,
    pub failures: Vec<StageFailure>,
    pub failure_count: usize,
    pub boundary_checks: Vec<BoundaryCheck>,
    pub verified: bool,
    /// Smallest and largest colour of the final colouring.
    pub colour_range: Option<(u64, u64)>,
    pub elapsed_ms: u128,
}

impl Diagnostics {
    fn fail(&mut self, failures: Vec<StageFailure>) {
        self.failure_count += failures.len();
        let room = FAILURE_CAP.saturating_sub(self.failures.len());
        self.failures.extend(failures.into_iter().take(room));
    }

    /// Name of the stage that stopped the run.
    pub fn failed_stage(&self) -> Option<&str> {
        self.failures.first().map(|f| f.stage.as_str())
    }

    pub fn invariants_hold(&self) -> bool {
        self.boundary_checks.iter().all(|b| b.violations.is_empty())
    }
}

#[derive(Debug, Clone)]
pub struct ConstructOutcome {
    /// Present only on a verified success.
    pub colouring: Option<EdgeColouring>,
    /// `2Q + 2q`.
    pub k_used: u64,
    pub diagnostics: Diagnostics,
}

impl ConstructOutcome {
    pub fn succeeded(&self) -> bool {
        self.colouring.is_some()
    }
}

/// Runs the staged randomized construction. Input problems are errors;
/// a stage that cannot complete yields an outcome without a colouring and
/// with the failure recorded in the diagnostics.
pub fn construct(g: &Graph, config: &ConstructConfig) -> Result<ConstructOutcome> {
    let start = Instant::now();
    check_radius(config.r)?;
    g.require_no_isolated_edge()?;
    let palette = PaletteParams::new(g.max_degree() as u64, config.r)?;
    check_capacity(g, palette.k_total)?;
    let thresholds = config.profile.resolve(g.max_degree());
    thresholds.validate()?;
    let balls = BallCache::build(g, config.r)?;

    let mut diag = Diagnostics {
        big_q: palette.big_q,
        small_q: palette.small_q,
        k_total: palette.k_total,
        seed: config.seed,
        profile: config.profile.to_string(),
        thresholds,
        stage_rounds: StageRounds::default(),
        feature_history: Vec::new(),
        initial_feature_violations: [0; FEATURES],
        parts: PartSizes::default(),
        e_prime_edges: 0,
        stats: StageStats::default(),
        reached: Stage::Init,
        failures: Vec::new(),
        failure_count: 0,
        boundary_checks: Vec::new(),
        verified: false,
        colour_range: None,
        elapsed_ms: 0,
    };
    let done = |mut diag: Diagnostics, colouring: Option<EdgeColouring>| {
        diag.elapsed_ms = start.elapsed().as_millis();
        Ok(ConstructOutcome { colouring, k_used: palette.k_total, diagnostics: diag })
    };

    let feature_cfg = FeatureConfig { thresholds, power: palette.power as f64 };
    let mut rng = rng::split(config.seed, stream::ORDERING);
    let partition = match resample_until_features(g, &balls, &mut rng, &feature_cfg, config.max_rounds)? {
        Ok(res) => {
            diag.stage_rounds.features = res.rounds;
            diag.feature_history = res.history;
            diag.initial_feature_violations = res.initial_counts;
            res.partition
        }
        Err(fail) => {
            diag.stage_rounds.features = fail.rounds;
            diag.feature_history = fail.history;
            diag.initial_feature_violations = fail.initial_counts;
            let counts = fail.report.violation_counts();
            let failures = fail
                .report
                .violations()
                .into_iter()
                .map(|(v, i)| StageFailure {
                    stage: "features".into(),
                    vertex: Some(v),
                    detail: format!("F{} fails (per-feature totals {counts:?})", i + 1),
                })
                .collect();
            diag.fail(failures);
            return done(diag, None);
        }
    };
    diag.parts = PartSizes {
        a: partition.count(Part::A),
        b: partition.count(Part::B),
        c: partition.count(Part::C),
    };

    let mut rng = rng::split(config.seed, stream::SPARSE_SET);
    let cset = match select_sparse_cset(g, &partition, thresholds.sparsity, &mut rng, config.max_rounds) {
        Ok(out) => out,
        Err(e) => {
            diag.fail(vec![StageFailure { stage: "sparse_set".into(), vertex: None, detail: e.to_string() }]);
            return done(diag, None);
        }
    };
    diag.stage_rounds.sparse_set = cset.rounds;
    diag.e_prime_edges = cset.set.len();
    if !cset.ok() {
        let failures = cset
            .violations
            .iter()
            .map(|&v| StageFailure {
                stage: "sparse_set".into(),
                vertex: Some(v),
                detail: format!("{} set edges", cset.set.degree[v]),
            })
            .collect();
        diag.fail(failures);
        return done(diag, None);
    }

    let mut state = ConstructState::new(g, &balls, palette, partition);
    let check = |state: &ConstructState<'_>, diag: &mut Diagnostics| {
        if config.check_invariants {
            diag.boundary_checks.push(BoundaryCheck { stage: state.stage, violations: state.invariant_violations(INVARIANT_CAP) });
        }
    };
    check(&state, &mut diag);

    let spread = SpreadCheck {
        big_q: palette.big_q,
        degree_ratio: thresholds.degree_ratio,
        factor: thresholds.spread_factor,
        spread: thresholds.spread,
    };
    let mut sub_rng = rng::split(config.seed, stream::SUBTRACTION);
    for step in 0..5 {
        let failures = match step {
            0 => state.run_stage_a()?,
            1 => state.run_stage_b()?,
            2 => {
                let (out, failures) = state.run_cset(cset.set.clone(), &spread, &mut sub_rng, config.max_rounds)?;
                diag.stage_rounds.subtraction = out.rounds;
                failures
            }
            3 => state.fix_b_to_lower()?,
            _ => state.run_stage_c()?,
        };
        diag.stats = state.stats.clone();
        if !failures.is_empty() {
            diag.reached = state.stage;
            diag.fail(failures);
            return done(diag, None);
        }
        check(&state, &mut diag);
    }
    diag.reached = state.stage;

    let colours = state.into_colours();
    diag.colour_range = colours.iter().min().zip(colours.iter().max()).map(|(&a, &b)| (a, b));
    let colouring = EdgeColouring::new(g, colours, palette.k_total)?;
    diag.verified = is_r_irregular(g, &colouring, config.r, palette.k_total);
    if !diag.verified {
        diag.fail(vec![StageFailure {
            stage: "verify".into(),
            vertex: None,
            detail: "final colouring has conflicts".into(),
        }]);
        return done(diag, None);
    }
    done(diag, Some(colouring))
}
