#![allow(dead_code)]
//! Random generators and brute-force oracles for the integration tests.
//! The oracles evaluate definitions directly and share no code paths with
//! the transforms and fast paths they check.

use capaloss::{
    Capacity, CountingProfile, LabelDistribution, LabelVector, LossSpec, Normalization,
    ScoreVector, ValueVector,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monotone, normalized capacity; Möbius masses may be negative.
pub fn random_capacity(rng: &mut impl Rng, k: usize) -> Capacity {
    let n = 1usize << k;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|m| m.count_ones());
    let mut values = vec![0.0; n];
    for &mask in &order[1..] {
        let floor = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| values[mask ^ (1 << b)])
            .fold(0.0, f64::max);
        // occasional flat steps exercise ties in the lattice
        let step = if mask == n - 1 {
            0.1 + rng.gen::<f64>()
        } else if rng.gen_bool(0.2) {
            0.0
        } else {
            rng.gen::<f64>()
        };
        values[mask] = floor + step;
    }
    let top = values[n - 1];
    for v in &mut values {
        *v /= top;
    }
    values[n - 1] = 1.0;
    Capacity::from_values(k, values).unwrap()
}

pub fn random_profile(rng: &mut impl Rng, k: usize) -> CountingProfile {
    let mut inner: Vec<f64> = (0..k.saturating_sub(1)).map(|_| rng.gen()).collect();
    inner.sort_by(f64::total_cmp);
    let mut v = vec![0.0];
    v.extend(inner);
    v.push(1.0);
    CountingProfile::new(v).unwrap()
}

/// Values drawn from a small grid so ties are common.
pub fn random_values(rng: &mut impl Rng, k: usize) -> ValueVector {
    ValueVector::new(
        (0..k)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    rng.gen_range(0..5) as f64 / 4.0
                } else {
                    rng.gen()
                }
            })
            .collect(),
    )
    .unwrap()
}

pub fn random_labels(rng: &mut impl Rng, k: usize) -> LabelVector {
    LabelVector::new((0..k).map(|_| rng.gen_range(0..=1)).collect()).unwrap()
}

pub fn random_scores(rng: &mut impl Rng, k: usize) -> ScoreVector {
    ScoreVector::new(
        (0..k)
            .map(|_| match rng.gen_range(0..6) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen(),
            })
            .collect(),
    )
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

pub fn permuted(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

/// m(A) = Σ_{B ⊆ A} (−1)^{|A|−|B|} μ(B), enumerating submasks.
pub fn moebius_brute(cap: &Capacity) -> Vec<f64> {
    let n = cap.values().len();
    (0..n)
        .map(|a| {
            let mut total = 0.0;
            let mut b = a;
            loop {
                let sign = if (a ^ b).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                total += sign * cap.values()[b];
                if b == 0 {
                    break;
                }
                b = (b - 1) & a;
            }
            total
        })
        .collect()
}

/// Choquet integral from the level-set definition over the distinct values:
/// Σ_j (t_j − t_{j−1}) · μ({i : u_i ≥ t_j}).
pub fn choquet_levels(u: &[f64], mu: impl Fn(u64) -> f64) -> f64 {
    let mut levels: Vec<f64> = u.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut prev = 0.0;
    let mut total = 0.0;
    for t in levels {
        let upper = u
            .iter()
            .enumerate()
            .filter(|(_, &x)| x >= t)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        total += (t - prev) * mu(upper);
        prev = t;
    }
    total
}

/// Lexicographic enumeration of {0,1}^k, label 1 most significant.
pub fn lexicographic_candidates(k: usize) -> Vec<LabelVector> {
    (0..1u64 << k)
        .map(|rank| {
            LabelVector::new((0..k).map(|i| (rank >> (k - 1 - i) & 1) as u8).collect()).unwrap()
        })
        .collect()
}

/// Full double loop: every candidate against every labeling through the
/// general loss evaluation. First strict minimum in lexicographic order.
pub fn bayes_brute(dist: &LabelDistribution, spec: &LossSpec) -> (LabelVector, f64) {
    let k = dist.k();
    let mut best: Option<(LabelVector, f64)> = None;
    for candidate in lexicographic_candidates(k) {
        let scores = candidate.to_scores();
        let mut risk = 0.0;
        for truth in 0..1u64 << k {
            let y = LabelVector::from_mask(k, truth);
            let p = dist.probability(&y);
            if p > 0.0 {
                risk += p * capaloss::loss_measure(&y, &scores, spec).unwrap();
            }
        }
        if best.as_ref().is_none_or(|(_, b)| risk < *b) {
            best = Some((candidate, risk));
        }
    }
    best.unwrap()
}

pub const FIVE_LABEL_TABLE: &str = include_str!("../data/five_label.txt");
pub const THREE_LABEL_TABLE: &str = include_str!("../data/three_label.txt");
