//! r-distant irregularity strength of graphs.
//!
//! An edge colouring with colours `1..=k` is r-distant irregular when any
//! two distinct vertices at distance at most `r` have different weighted
//! degrees (sums of incident colours). The least such `k` is the strength
//! `s_r(G)`; it exists iff the graph has no isolated edge.
//!
//! The crate provides graphs with r-ball queries ([`graph`]), weights and
//! conflict checking ([`verify`]), an exact solver for small graphs
//! ([`exact`]), a sequential greedy heuristic ([`greedy`]), a randomized
//! staged construction with palette `2Q + 2q` ([`construct`]), generators
//! ([`generate`]) and a benchmark harness ([`bench`]).

pub mod bench;
pub mod construct;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{BallCache, Distance, Graph, RBall};
pub use verify::{find_conflicts, is_r_irregular, weight_profile, weighted_degree, ConflictReport, EdgeColouring};
