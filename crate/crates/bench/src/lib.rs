//! Seeded inputs shared by the benchmarks.

use capaloss::{Capacity, LabelDistribution, Normalization, ValueVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_values(rng: &mut impl Rng, k: usize) -> ValueVector {
    ValueVector::new((0..k).map(|_| rng.gen::<f64>()).collect()).unwrap()
}

/// Monotone capacity from random non-negative Möbius masses.
pub fn random_capacity(rng: &mut impl Rng, k: usize) -> Capacity {
    let masses: Vec<f64> = (0..1u64 << k)
        .map(|m| if m == 0 { 0.0 } else { rng.gen::<f64>() })
        .collect();
    let total: f64 = masses.iter().sum();
    Capacity::from_fn(k, |set| {
        (0..1u64 << k)
            .filter(|&m| m & !set.bits() == 0)
            .map(|m| masses[m as usize])
            .sum::<f64>()
            / total
    })
    .unwrap()
}

pub fn random_distribution(rng: &mut impl Rng, k: usize) -> LabelDistribution {
    LabelDistribution::from_masks(
        k,
        (0..1u64 << k).map(|m| (m, rng.gen::<f64>())),
        Normalization::Lenient,
    )
    .unwrap()
}
