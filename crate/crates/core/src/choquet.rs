//! Discrete Choquet integral of a non-negative vector, by three routes:
//! the sorted definition over a dense capacity, the Möbius form, and the
//! OWA form for counting measures. All three agree up to rounding.
//!
//! Ties in the ascending sort are broken by label index. The integral itself
//! does not depend on how ties are ordered.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::labelset::LabelSet;
use crate::measures::{Capacity, CountingProfile, MoebiusRepresentation, OwaWeights};
use crate::numeric::ordered_sum;

/// Non-negative values to aggregate, one per label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueVector(Vec<f64>);

impl ValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, x)) = values
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "value {} at label {} must be finite and non-negative",
                x,
                i + 1
            )));
        }
        Ok(ValueVector(values))
    }

    pub(crate) fn new_unchecked(values: Vec<f64>) -> Self {
        ValueVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Label positions in ascending order of value, ties by position.
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        // stable sort keeps index order among ties
        order.sort_by(|&a, &b| self.0[a].total_cmp(&self.0[b]));
        order
    }
}

impl AsRef<[f64]> for ValueVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Σ_i (u_(i) − u_(i−1)) · μ(A_(i)), where A_(i) holds the labels at
/// ascending ranks i..K.
pub fn choquet_sorted(u: &ValueVector, cap: &Capacity) -> Result<f64> {
    check_dims(cap.k(), u.len())?;
    let order = u.ascending_order();
    let mut upper = LabelSet::full(cap.k());
    let mut prev = 0.0;
    let terms = order.iter().map(|&pos| {
        let x = u.0[pos];
        let term = (x - prev) * cap.value(upper);
        prev = x;
        upper = LabelSet(upper.bits() & !(1 << pos));
        term
    });
    Ok(ordered_sum(terms.collect::<Vec<_>>()))
}

/// Σ_T m(T) · min_{i∈T} u_i over the stored masses; O(K · #masses).
pub fn choquet_moebius(u: &ValueVector, moeb: &MoebiusRepresentation) -> Result<f64> {
    check_dims(moeb.k(), u.len())?;
    let terms: Vec<f64> = moeb
        .masses()
        .iter()
        .map(|(set, &mass)| {
            let min = set
                .positions()
                .map(|p| u.0[p])
                .fold(f64::INFINITY, f64::min);
            mass * min
        })
        .collect();
    Ok(ordered_sum(terms))
}

/// Σ_i w_i · u_(i) with ascending u and the profile's OWA weights.
pub fn choquet_counting(u: &ValueVector, profile: &CountingProfile) -> Result<f64> {
    choquet_owa(u, &profile.owa_weights())
}

pub fn choquet_owa(u: &ValueVector, weights: &OwaWeights) -> Result<f64> {
    check_dims(weights.k(), u.len())?;
    let mut sorted = u.0.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(ordered_sum(
        weights
            .weights()
            .iter()
            .zip(&sorted)
            .map(|(w, x)| w * x)
            .collect::<Vec<_>>(),
    ))
}

/// Same value as [`choquet_owa`], summed over level increments against the
/// cumulative profile. Constant inputs come out exact.
pub(crate) fn choquet_owa_levels(u: &ValueVector, weights: &OwaWeights) -> Result<f64> {
    check_dims(weights.k(), u.len())?;
    let v = weights.profile_values();
    let k = weights.k();
    let mut sorted = u.0.clone();
    sorted.sort_by(f64::total_cmp);
    let mut prev = 0.0;
    let terms: Vec<f64> = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let t = (x - prev) * v[k - i];
            prev = x;
            t
        })
        .collect();
    Ok(ordered_sum(terms))
}
