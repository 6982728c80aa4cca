use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    A,
    B,
    C,
}

/// Random vertex order from independent uniform samples, split into
/// A (low samples), B (middle) and C (high samples).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedPartition {
    pub x: Vec<f64>,
    /// Vertices ascending by `(x, id)`.
    pub order: Vec<usize>,
    /// `rank[v]` is the position of `v` in `order`.
    pub rank: Vec<usize>,
    pub label: Vec<Part>,
    pub t_a: f64,
    pub t_c: f64,
}

pub(crate) fn check_thresholds(t_a: f64, t_c: f64) -> Result<()> {
    if t_a > 0.0 && t_c > 0.0 && t_a < 1.0 - t_c {
        Ok(())
    } else {
        Err(Error::Argument(format!("need 0 < t_a < 1 - t_c < 1, got t_a = {t_a}, t_c = {t_c}")))
    }
}

pub fn label_of(x: f64, t_a: f64, t_c: f64) -> Part {
    if x < t_a {
        Part::A
    } else if x > 1.0 - t_c {
        Part::C
    } else {
        Part::B
    }
}

impl OrderedPartition {
    /// Builds the order and labels from given samples.
    pub fn from_samples(x: Vec<f64>, t_a: f64, t_c: f64) -> Result<Self> {
        check_thresholds(t_a, t_c)?;
        let n = x.len();
        let mut p = OrderedPartition {
            x,
            order: (0..n).collect(),
            rank: vec![0; n],
            label: vec![Part::B; n],
            t_a,
            t_c,
        };
        p.refresh();
        Ok(p)
    }

    /// Recomputes order, ranks and labels after samples changed.
    pub(crate) fn refresh(&mut self) {
        let x = &self.x;
        self.order.sort_by(|&u, &v| x[u].total_cmp(&x[v]).then(u.cmp(&v)));
        for (i, &v) in self.order.iter().enumerate() {
            self.rank[v] = i;
        }
        for v in 0..x.len() {
            self.label[v] = label_of(x[v], self.t_a, self.t_c);
        }
    }

    /// True iff `u` comes before `v`.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    pub fn part(&self, v: usize) -> Part {
        self.label[v]
    }

    /// Vertices of one part, in order.
    pub fn members(&self, part: Part) -> Vec<usize> {
        self.order.iter().copied().filter(|&v| self.label[v] == part).collect()
    }

    pub fn count(&self, part: Part) -> usize {
        self.label.iter().filter(|&&l| l == part).count()
    }
}

/// Draws an independent uniform sample per vertex and orders by it, ties
/// broken by vertex id.
pub fn sample_ordering(g: &Graph, rng: &mut Rng, t_a: f64, t_c: f64) -> Result<OrderedPartition> {
    check_thresholds(t_a, t_c)?;
    let x = (0..g.n()).map(|_| rng.gen::<f64>()).collect();
    OrderedPartition::from_samples(x, t_a, t_c)
}
