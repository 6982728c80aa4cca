//! Threshold profiles. Every place where the construction uses a power of
//! `ln Δ` reads it from a resolved [`Thresholds`] value instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resolved numeric thresholds for one run.
///
/// With `L = ln Δ` the paper preset is: `a_fraction = L^-2`,
/// `c_gap = L^-3`, `sparsity = L^6`, `spread = L^3`, `deviation = L`,
/// `degree_ratio = 5L`, feature factors `2` and `1/2`, `spread_factor = 5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A is `{v : x_v < a_fraction}`.
    pub a_fraction: f64,
    /// C is `{v : x_v > 1 - c_gap}`.
    pub c_gap: f64,
    /// Sparse C-set degrees are at most `d(v) / sparsity`.
    pub sparsity: f64,
    /// Residue classes in C hold at most `spread_factor · d(v) / spread`
    /// comparable r-neighbours.
    pub spread: f64,
    pub spread_factor: f64,
    /// Multiplier of the square-root deviation terms of F5 and F6.
    pub deviation: f64,
    /// Degree window for the residue-class count.
    pub degree_ratio: f64,
    pub f1_upper: f64,
    pub f2_upper: f64,
    pub f3_lower: f64,
    pub f3_upper: f64,
    pub f4_lower: f64,
    pub f4_upper: f64,
}

impl Thresholds {
    /// Every `ln Δ` replaced by `scale`.
    pub fn from_log_scale(scale: f64) -> Thresholds {
        Thresholds {
            a_fraction: scale.powi(-2),
            c_gap: scale.powi(-3),
            sparsity: scale.powi(6),
            spread: scale.powi(3),
            spread_factor: 5.0,
            deviation: scale,
            degree_ratio: 5.0 * scale,
            f1_upper: 2.0,
            f2_upper: 2.0,
            f3_lower: 0.5,
            f3_upper: 2.0,
            f4_lower: 0.5,
            f4_upper: 2.0,
        }
    }

    /// Frozen calibration for desk-scale runs on 16-regular graphs at
    /// `r = 2` (see the README for how it was measured).
    pub fn desk() -> Thresholds {
        Thresholds {
            a_fraction: 0.55,
            c_gap: 0.4,
            sparsity: 4.0,
            spread: 4.0,
            spread_factor: 5.0,
            deviation: 3.0,
            degree_ratio: 5.0 * 16f64.ln(),
            f1_upper: 1.1,
            f2_upper: 2.0,
            f3_lower: 0.0,
            f3_upper: 5.0,
            f4_lower: 0.15,
            f4_upper: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ta = self.a_fraction;
        let tc = self.c_gap;
        if !(ta > 0.0 && tc > 0.0 && ta < 1.0 - tc) {
            return Err(Error::Argument(format!(
                "need 0 < t_a < 1 - t_c < 1, got t_a = {ta}, t_c = {tc}"
            )));
        }
        let positive = [self.sparsity, self.spread, self.spread_factor, self.degree_ratio];
        if positive.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Argument("sparsity, spread and degree window must be positive".into()));
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "ta" => &mut self.a_fraction,
            "tc" => &mut self.c_gap,
            "te" => &mut self.sparsity,
            "tl" => &mut self.spread,
            "spread_factor" => &mut self.spread_factor,
            "dev" => &mut self.deviation,
            "ratio" => &mut self.degree_ratio,
            "f1" => &mut self.f1_upper,
            "f2" => &mut self.f2_upper,
            "f3lo" => &mut self.f3_lower,
            "f3hi" => &mut self.f3_upper,
            "f4lo" => &mut self.f4_lower,
            "f4hi" => &mut self.f4_upper,
            _ => return Err(Error::Argument(format!("unknown threshold key {key:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

/// How thresholds are derived for a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdProfile {
    /// Literal formulas in `ln Δ`.
    Paper,
    /// `ln Δ` replaced by a constant.
    Relaxed(f64),
    /// Explicit values.
    Custom(Thresholds),
}

impl ThresholdProfile {
    pub fn resolve(&self, delta_max: usize) -> Thresholds {
        match self {
            ThresholdProfile::Paper => Thresholds::from_log_scale((delta_max.max(2) as f64).ln()),
            ThresholdProfile::Relaxed(beta) => Thresholds::from_log_scale(*beta),
            ThresholdProfile::Custom(t) => *t,
        }
    }
}

impl fmt::Display for ThresholdProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdProfile::Paper => write!(f, "paper"),
            ThresholdProfile::Relaxed(b) => write!(f, "relaxed:{b}"),
            ThresholdProfile::Custom(t) if *t == Thresholds::desk() => write!(f, "desk"),
            ThresholdProfile::Custom(t) => write!(
                f,
                "custom:ta={},tc={},te={},tl={},spread_factor={},dev={},ratio={},f1={},f2={},f3lo={},f3hi={},f4lo={},f4hi={}",
                t.a_fraction,
                t.c_gap,
                t.sparsity,
                t.spread,
                t.spread_factor,
                t.deviation,
                t.degree_ratio,
                t.f1_upper,
                t.f2_upper,
                t.f3_lower,
                t.f3_upper,
                t.f4_lower,
                t.f4_upper
            ),
        }
    }
}

/// Accepts `paper`, `relaxed:BETA`, `desk`, or `custom:key=value,...`;
/// `relaxed:BETA` and `desk` also take `,key=value` overrides, which turn
/// the profile into an explicit one.
impl FromStr for ThresholdProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',');
        let head = parts.next().unwrap_or_default();
        let overrides: Vec<&str> = parts.collect();
        let bad = |what: &str| Error::Argument(format!("bad profile {s:?}: {what}"));
        let (base, mut thresholds) = if head == "paper" {
            (ThresholdProfile::Paper, None)
        } else if head == "desk" {
            (ThresholdProfile::Custom(Thresholds::desk()), Some(Thresholds::desk()))
        } else if let Some(beta) = head.strip_prefix("relaxed:") {
            let beta: f64 = beta.parse().map_err(|_| bad("beta is not a number"))?;
            if !(beta > 0.0) {
                return Err(bad("beta must be positive"));
            }
            (ThresholdProfile::Relaxed(beta), Some(Thresholds::from_log_scale(beta)))
        } else if let Some(first) = head.strip_prefix("custom:") {
            let mut t = Thresholds::desk();
            apply(&mut t, first).map_err(|_| bad(first))?;
            (ThresholdProfile::Custom(t), Some(t))
        } else {
            return Err(bad("unknown preset"));
        };
        if overrides.is_empty() {
            if let ThresholdProfile::Custom(t) = &base {
                t.validate()?;
            }
            return Ok(base);
        }
        let t = thresholds.as_mut().ok_or_else(|| bad("the paper preset takes no overrides"))?;
        for kv in overrides {
            apply(t, kv).map_err(|_| bad(kv))?;
        }
        t.validate()?;
        Ok(ThresholdProfile::Custom(*t))
    }
}

fn apply(t: &mut Thresholds, kv: &str) -> Result<()> {
    let (k, v) = kv.split_once('=').ok_or_else(|| Error::Argument(kv.into()))?;
    let v: f64 = v.parse().map_err(|_| Error::Argument(kv.into()))?;
    t.set(k.trim(), v)
}
