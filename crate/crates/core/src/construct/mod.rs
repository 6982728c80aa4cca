//! Randomized staged construction of r-distant irregular colourings with
//! colours in `[q, 2Q + 2q]`.
//!
//! A random vertex order is resampled until six local degree features
//! hold, then vertices are coloured in order: A-vertices take weights in
//! disjoint pairs `{p, p + Q}` divisible by 3, B-vertices take disjoint
//! pairs, a sparse edge set inside C moves C-weights off multiples of 3 and
//! spreads their residues mod `Q`, B-vertices drop to the lower element of
//! their pair, and C-vertices are separated by `±Q` toggles on their edges
//! into A.

mod cset;
mod features;
mod ordering;
mod palette;
mod pipeline;
mod profile;
mod stages;

pub use cset::{
    adjust_cset_mod3, random_subtract_cset, select_sparse_cset, spread_violations, CSetOutcome, SparseCSet, SpreadCheck,
    SpreadViolation, SubtractOutcome,
};
pub use features::{
    check_features, resample_until_features, vertex_features, FeatureConfig, FeatureFailure, FeatureReport, Resampled,
    VertexFeatures, FEATURES,
};
pub use ordering::{label_of, sample_ordering, OrderedPartition, Part};
pub use palette::PaletteParams;
pub use pipeline::{construct, BoundaryCheck, ConstructConfig, ConstructOutcome, Diagnostics, PartSizes, StageRounds};
pub use profile::{ThresholdProfile, Thresholds};
pub use stages::{pair_base, ConstructState, Stage, StageCounters, StageFailure, StageStats};
