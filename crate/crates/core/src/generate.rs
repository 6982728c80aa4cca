//! Seeded graph generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, stream, Rng};

/// Attempts per random instance before giving up.
pub const RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path,
    Cycle,
    /// `K_{1,n-1}`.
    Star,
    Complete,
    /// Erdős–Rényi `G(n, p)`.
    Gnp(f64),
    RandomRegular(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path => write!(f, "path"),
            Family::Cycle => write!(f, "cycle"),
            Family::Star => write!(f, "star"),
            Family::Complete => write!(f, "complete"),
            Family::Gnp(p) => write!(f, "gnp:{p}"),
            Family::RandomRegular(d) => write!(f, "regular:{d}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("unknown graph family {s:?}"));
        Ok(match s {
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "star" => Family::Star,
            "complete" => Family::Complete,
            _ => {
                if let Some(p) = s.strip_prefix("gnp:") {
                    Family::Gnp(p.parse().map_err(|_| bad())?)
                } else if let Some(d) = s.strip_prefix("regular:") {
                    Family::RandomRegular(d.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    pub min_degree: usize,
    pub forbid_isolated_edges: bool,
}

impl Constraints {
    fn check(&self, g: &Graph) -> bool {
        (g.n() == 0 || g.min_degree() >= self.min_degree) && !(self.forbid_isolated_edges && g.has_isolated_edge())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub constraints: Constraints,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec { family, n, seed, constraints: Constraints::default() }
    }

    pub fn with_constraints(mut self, constraints: Constraints) -> Self {
        self.constraints = constraints;
        self
    }

    /// Short identifier, e.g. `regular:16/n=2000/seed=7`.
    pub fn id(&self) -> String {
        match self.family {
            Family::Gnp(_) | Family::RandomRegular(_) => format!("{}/n={}/seed={}", self.family, self.n, self.seed),
            _ => format!("{}/n={}", self.family, self.n),
        }
    }
}

fn deterministic(family: Family, n: usize) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = match family {
        Family::Path => (1..n).map(|i| (i - 1, i)).collect(),
        Family::Cycle => {
            if n < 3 {
                return Err(Error::Argument(format!("a cycle needs at least 3 vertices, got {n}")));
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        Family::Star => (1..n).map(|i| (0, i)).collect(),
        Family::Complete => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        _ => unreachable!("random family"),
    };
    Graph::from_edges(n, edges)
}

fn gnp(n: usize, p: f64, rng: &mut Rng) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// One attempt of the pairing model: points are matched two at a time at
/// random, redrawing a match that would create a loop or a repeated edge.
/// Returns `None` when the remaining points admit no valid match quickly.
fn pairing_attempt(n: usize, d: usize, rng: &mut Rng) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    points.shuffle(rng);
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    while !points.is_empty() {
        let len = points.len();
        let mut found = None;
        for _ in 0..100 + 4 * len {
            let i = rng.gen_range(0..len);
            let j = rng.gen_range(0..len);
            let (u, v) = (points[i], points[j]);
            if i != j && u != v && !seen.contains(&(u.min(v), u.max(v))) {
                found = Some((i, j));
                break;
            }
        }
        let (i, j) = found?;
        let (u, v) = (points[i], points[j]);
        let (hi, lo) = (i.max(j), i.min(j));
        points.swap_remove(hi);
        points.swap_remove(lo);
        seen.insert((u.min(v), u.max(v)));
        edges.push((u.min(v), u.max(v)));
    }
    Some(edges)
}

fn random_regular(n: usize, d: usize, rng: &mut Rng) -> Option<Result<Graph>> {
    pairing_attempt(n, d, rng).map(|edges| Graph::from_edges(n, edges))
}

/// Builds the graph described by `spec`. Random families are redrawn until
/// the constraints hold, at most [`RETRY_BUDGET`] times; fixed seeds give
/// identical graphs.
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    let n = spec.n;
    match spec.family {
        Family::Gnp(p) if !(p > 0.0 && p < 1.0) => {
            return Err(Error::Argument(format!("gnp needs 0 < p < 1, got {p}")));
        }
        Family::RandomRegular(d) if d >= n || (n * d) % 2 == 1 => {
            return Err(Error::Argument(format!("random regular needs d < n and n·d even, got n = {n}, d = {d}")));
        }
        Family::Gnp(_) | Family::RandomRegular(_) => {}
        family => {
            let g = deterministic(family, n)?;
            return if spec.constraints.check(&g) {
                Ok(g)
            } else {
                Err(Error::Generation(format!("{} violates {:?}", spec.id(), spec.constraints)))
            };
        }
    }
    let mut rng = rng::split(spec.seed, stream::GENERATOR);
    for _ in 0..RETRY_BUDGET {
        let g = match spec.family {
            Family::Gnp(p) => gnp(n, p, &mut rng)?,
            Family::RandomRegular(d) => match random_regular(n, d, &mut rng) {
                Some(g) => g?,
                None => continue,
            },
            _ => unreachable!(),
        };
        if spec.constraints.check(&g) {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "{}: constraints {:?} unmet after {RETRY_BUDGET} attempts",
        spec.id(),
        spec.constraints
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_families() {
        let g = generate(&GenSpec::new(Family::Star, 4, 0)).unwrap();
        assert_eq!((g.m(), g.max_degree(), g.min_degree()), (3, 3, 1));
        let g = generate(&GenSpec::new(Family::Cycle, 5, 0)).unwrap();
        assert!(g.is_regular() && g.max_degree() == 2 && g.m() == 5);
        let g = generate(&GenSpec::new(Family::Complete, 5, 0)).unwrap();
        assert_eq!(g.m(), 10);
    }

    #[test]
    fn regular_is_regular_and_deterministic() {
        let spec = GenSpec::new(Family::RandomRegular(16), 2000, 7);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert!(a.is_regular() && a.max_degree() == 16);
        assert_eq!(a.edges(), b.edges());
        let c = generate(&GenSpec::new(Family::RandomRegular(16), 2000, 8)).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn constraints() {
        let spec = GenSpec::new(Family::Path, 2, 0)
            .with_constraints(Constraints { min_degree: 0, forbid_isolated_edges: true });
        assert!(matches!(generate(&spec), Err(Error::Generation(_))));
        let spec = GenSpec::new(Family::Gnp(0.01), 30, 1).with_constraints(Constraints { min_degree: 5, ..Default::default() });
        assert!(matches!(generate(&spec), Err(Error::Generation(_))));
        let spec = GenSpec::new(Family::Gnp(0.3), 30, 1).with_constraints(Constraints { min_degree: 2, forbid_isolated_edges: true });
        assert!(generate(&spec).unwrap().min_degree() >= 2);
        assert!(generate(&GenSpec::new(Family::RandomRegular(3), 5, 0)).is_err());
        assert!(generate(&GenSpec::new(Family::Gnp(1.0), 5, 0)).is_err());
    }

    #[test]
    fn family_round_trip() {
        for f in [Family::Path, Family::Cycle, Family::Star, Family::Complete, Family::Gnp(0.25), Family::RandomRegular(4)] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("tree".parse::<Family>().is_err());
    }
}
