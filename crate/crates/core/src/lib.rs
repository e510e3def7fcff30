//! Multi-label classification losses built on non-additive measures.
//!
//! The loss of a score vector `s` against ground truth `y` is one minus the
//! discrete Choquet integral of the per-label correctness `1 − |s_i − y_i|`
//! with respect to a capacity on label subsets. Hamming and subset 0/1 are
//! the two extremes; counting measures in between yield OWA losses, with the
//! polynomial and binomial families as one-parameter interpolations.
//!
//! Besides the losses, the crate provides an exact Bayes-optimal predictor
//! by enumeration and an evaluation harness for parameter sweeps and
//! pairwise method comparisons.

pub mod bayes;
pub mod choquet;
pub mod dataset;
mod error;
mod labelset;
pub mod losses;
pub mod measures;
pub mod numeric;
pub mod sweep;
pub mod synthetic;

pub use bayes::{
    bayes_optimal, expected_loss, marginals, BayesOptimum, LabelDistribution, Normalization,
};
pub use choquet::{choquet_counting, choquet_moebius, choquet_sorted, ValueVector};
pub use dataset::{compute_meta, load_predictions, DatasetMeta, PredictionSet, ResultRow};
pub use error::{Error, Result};
pub use labelset::{LabelSet, MAX_LABELS};
pub use losses::{
    correctness, loss_binary_shortcut, loss_fmeasure, loss_hamming, loss_measure, loss_subset01,
    LabelVector, Loss, LossSpec, ScoreVector,
};
pub use measures::{
    additivity_order, capacity_from_covering, capacity_of, expand_counting, moebius_of,
    owa_weights, validate_capacity, Capacity, CountingProfile, MoebiusRepresentation, OwaWeights,
    ValidationReport,
};
pub use sweep::{
    curvature_summary, diagonal_crossings, mean_loss, pairwise_trace, run_sweep, Family,
    PairwiseTrace, SweepResult, SweepSpec,
};
