//! Seeded synthetic data with dependent labels.
//!
//! Each context draws a distribution whose joint mode differs from its
//! marginal mode; instances are sampled from it and two predictors answer
//! every instance with the Bayes-optimal prediction of their context: one
//! under Hamming (the marginal mode), one under subset 0/1 (the joint mode).

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bayes::{bayes_optimal, LabelDistribution, Normalization};
use crate::dataset::PredictionSet;
use crate::error::{Error, Result};
use crate::losses::{LabelVector, LossSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureConfig {
    pub k: usize,
    pub contexts: usize,
    pub instances_per_context: usize,
    pub seed: u64,
}

impl Default for FixtureConfig {
    fn default() -> Self {
        FixtureConfig {
            k: 6,
            contexts: 8,
            instances_per_context: 250,
            seed: 7,
        }
    }
}

pub struct CrossingFixture {
    pub distributions: Vec<LabelDistribution>,
    /// Hamming-optimal predictions, named `marginal`.
    pub marginal: PredictionSet,
    /// Subset-0/1-optimal predictions, named `joint`.
    pub joint: PredictionSet,
}

/// A distribution over {0,1}^k (4 ≤ k ≤ 20) with one heavy labeling, the
/// anchor, and most remaining mass on its complement and on the labelings
/// that disagree with the anchor on all but one label.
///
/// The anchor carries 0.22..0.28, a uniform background 0.06, and each of
/// the k + 1 partners at most 0.72 · 1.1 / (1.1 + 0.9k) ≤ 0.17. So the
/// anchor is the joint mode while every marginal favors the complement.
pub fn dependent_distribution<R: Rng>(k: usize, rng: &mut R) -> Result<LabelDistribution> {
    if !(4..=crate::bayes::ENUMERATION_CAP).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "fixture K must lie in 4..=20, got {k}"
        )));
    }
    let full = (1u64 << k) - 1;
    let anchor: u64 = rng.gen_range(0..=full);
    let anchor_mass = rng.gen_range(0.22..0.28);
    let background = 0.06;
    let mut mass = vec![background / (1u64 << k) as f64; 1 << k];
    mass[anchor as usize] += anchor_mass;
    let partners: Vec<u64> = std::iter::once(anchor ^ full)
        .chain((0..k).map(|i| anchor ^ full ^ (1 << i)))
        .collect();
    let raw: Vec<f64> = partners.iter().map(|_| rng.gen_range(0.9..1.1)).collect();
    let total: f64 = raw.iter().sum();
    let spread = 1.0 - anchor_mass - background;
    for (&mask, w) in partners.iter().zip(raw) {
        mass[mask as usize] += spread * w / total;
    }
    LabelDistribution::from_masks(
        k,
        mass.into_iter().enumerate().map(|(m, p)| (m as u64, p)),
        Normalization::Lenient,
    )
}

pub fn crossing_fixture(config: &FixtureConfig) -> Result<CrossingFixture> {
    let k = config.k;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut distributions = Vec::with_capacity(config.contexts);
    let mut truth = Vec::new();
    let mut marginal_pred = Vec::new();
    let mut joint_pred = Vec::new();
    for _ in 0..config.contexts {
        let dist = dependent_distribution(k, &mut rng)?;
        let hamming = bayes_optimal(&dist, &LossSpec::Hamming)?.prediction;
        let subset = bayes_optimal(&dist, &LossSpec::Subset01)?.prediction;
        let support = dist.support();
        let sampler = WeightedIndex::new(support.iter().map(|&(_, p)| p))
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        for _ in 0..config.instances_per_context {
            let mask = support[sampler.sample(&mut rng)].0;
            truth.push(LabelVector::from_mask(k, mask));
            marginal_pred.push(hamming.to_scores());
            joint_pred.push(subset.to_scores());
        }
        distributions.push(dist);
    }
    Ok(CrossingFixture {
        distributions,
        marginal: PredictionSet::new("marginal", "synthetic", k, truth.clone(), marginal_pred)?,
        joint: PredictionSet::new("joint", "synthetic", k, truth, joint_pred)?,
    })
}
