use serde::{Deserialize, Serialize};

use super::{check_dense, Capacity, DEFAULT_TOL, WEIGHT_NOISE};
use crate::error::{Error, Result};
use crate::numeric::binomial_ratio;

/// A symmetric (counting) measure μ(A) = v(|A|/K), stored as
/// `v[j] = v(j/K)` for `j = 0..=K`. Valid for any `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingProfile {
    v: Vec<f64>,
}

impl CountingProfile {
    /// Validates `v` with the default boundary tolerance.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        Self::with_tol(v, DEFAULT_TOL)
    }

    /// Endpoints within `tol` of 0 and 1 are snapped to them exactly. Interior
    /// steps may decrease by at most [`WEIGHT_NOISE`]; anything larger would
    /// produce a negative OWA weight and is rejected.
    pub fn with_tol(mut v: Vec<f64>, tol: f64) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "need at least 2 values (K >= 1), got {}",
                v.len()
            )));
        }
        if let Some(j) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidProfile(format!("v[{j}] is not finite")));
        }
        let k = v.len() - 1;
        if v[0].abs() > tol {
            return Err(Error::InvalidProfile(format!(
                "v[0] = {}, expected 0",
                v[0]
            )));
        }
        if (v[k] - 1.0).abs() > tol {
            return Err(Error::InvalidProfile(format!(
                "v[{k}] = {}, expected 1",
                v[k]
            )));
        }
        v[0] = 0.0;
        v[k] = 1.0;
        for j in 0..k {
            if v[j + 1] - v[j] < -WEIGHT_NOISE {
                return Err(Error::InvalidProfile(format!(
                    "decreasing at j={}: v[{}] = {} > v[{}] = {}",
                    j + 1,
                    j,
                    v[j],
                    j + 1,
                    v[j + 1]
                )));
            }
        }
        Ok(CountingProfile { v })
    }

    /// v[j] = j/K.
    pub fn hamming(k: usize) -> Result<Self> {
        Self::polynomial(k, 1.0)
    }

    /// v[j] = 0 for j < K, v[K] = 1.
    pub fn subset01(k: usize) -> Result<Self> {
        Self::binomial(k, k)
    }

    /// v[j] = (j/K)^alpha for alpha ≥ 1.
    pub fn polynomial(k: usize, alpha: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        if !(alpha.is_finite() && alpha >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "polynomial exponent must be a finite value >= 1, got {alpha}"
            )));
        }
        let v = (0..=k).map(|j| (j as f64 / k as f64).powf(alpha)).collect();
        Ok(CountingProfile { v })
    }

    /// v[j] = C(j, order) / C(K, order), for 1 ≤ order ≤ K.
    pub fn binomial(k: usize, order: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        if order == 0 || order > k {
            return Err(Error::InvalidParameter(format!(
                "binomial order must lie in 1..={k}, got {order}"
            )));
        }
        let v = (0..=k)
            .map(|j| binomial_ratio(j as u64, k as u64, order as u64))
            .collect();
        Ok(CountingProfile { v })
    }

    pub fn k(&self) -> usize {
        self.v.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// v(j/K).
    pub fn at(&self, j: usize) -> f64 {
        self.v[j]
    }

    /// Loss of a binary prediction with `errors` wrong labels: 1 − v[K − errors].
    pub fn binary_loss(&self, errors: usize) -> f64 {
        1.0 - self.v[self.k() - errors]
    }

    /// True when v[j] == j/K exactly, i.e. the measure is the uniform additive one.
    pub fn is_hamming(&self) -> bool {
        let k = self.k() as f64;
        self.v.iter().enumerate().all(|(j, &x)| x == j as f64 / k)
    }

    /// True when all mass sits on the full set.
    pub fn is_subset01(&self) -> bool {
        self.v[..self.k()].iter().all(|&x| x == 0.0)
    }

    pub fn owa_weights(&self) -> OwaWeights {
        owa_weights(self)
    }
}

/// OWA weights of a counting measure.
///
/// `weights()[i]` (0-based) multiplies the (i+1)-th smallest correctness
/// value, which is the (i+1)-th largest error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OwaWeights {
    w: Vec<f64>,
    // cumulative profile: v[j] = sum of the j weights on the largest correctness values
    v: Vec<f64>,
}

impl OwaWeights {
    /// Accepts explicit weights; negative entries beyond numerical noise and
    /// sums away from 1 by more than [`DEFAULT_TOL`] are rejected.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidProfile("empty weight vector".into()));
        }
        if let Some(x) = w.iter().find(|x| !x.is_finite() || **x < -WEIGHT_NOISE) {
            return Err(Error::InvalidProfile(format!(
                "OWA weights must be non-negative, got {x}"
            )));
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidProfile(format!(
                "OWA weights sum to {total}, expected 1"
            )));
        }
        let w: Vec<f64> = w.into_iter().map(|x| x.max(0.0)).collect();
        let k = w.len();
        let mut v = Vec::with_capacity(k + 1);
        let mut acc = 0.0;
        v.push(0.0);
        for j in 1..=k {
            acc += w[k - j];
            v.push(acc);
        }
        v[k] = 1.0;
        Ok(OwaWeights { w, v })
    }

    pub fn k(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// The counting profile these weights aggregate with.
    pub fn profile(&self) -> CountingProfile {
        CountingProfile { v: self.v.clone() }
    }

    pub(crate) fn profile_values(&self) -> &[f64] {
        &self.v
    }
}

/// w_i = v[K − i + 1] − v[K − i], i = 1..K; tiny negatives from rounding
/// are clamped to zero.
pub fn owa_weights(profile: &CountingProfile) -> OwaWeights {
    let k = profile.k();
    let v = &profile.v;
    let w = (1..=k)
        .map(|i| {
            let d = v[k - i + 1] - v[k - i];
            debug_assert!(d >= -WEIGHT_NOISE);
            d.max(0.0)
        })
        .collect();
    OwaWeights { w, v: v.clone() }
}

/// Dense capacity μ(A) = v[|A|].
pub fn expand_counting(profile: &CountingProfile) -> Result<Capacity> {
    let k = profile.k();
    check_dense(k)?;
    Capacity::from_fn(k, |a| profile.v[a.len()])
}
