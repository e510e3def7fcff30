use std::fmt;

use serde::{Deserialize, Serialize};

use super::check_dense;
use crate::error::{Error, Result};
use crate::labelset::LabelSet;

/// A set function on the subsets of `K` labels, stored densely by bitmask.
///
/// Construction only checks the shape. Use [`validate_capacity`] (or
/// [`Capacity::validated`]) to check normalization and monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Capacity {
    k: usize,
    values: Vec<f64>,
}

impl Capacity {
    pub fn from_values(k: usize, values: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        check_dense(k)?;
        if values.len() != 1 << k {
            return Err(Error::InvalidParameter(format!(
                "a capacity on {k} labels needs {} values, got {}",
                1usize << k,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite value at subset {}",
                LabelSet(bad as u64)
            )));
        }
        Ok(Capacity { k, values })
    }

    /// Like [`Capacity::from_values`], but rejects values violating the axioms.
    pub fn validated(k: usize, values: Vec<f64>, tol: f64) -> Result<Self> {
        let cap = Self::from_values(k, values)?;
        let report = validate_capacity(&cap, tol);
        if report.is_valid() {
            Ok(cap)
        } else {
            Err(Error::InvalidMeasure(report))
        }
    }

    pub fn from_fn(k: usize, f: impl Fn(LabelSet) -> f64) -> Result<Self> {
        check_dense(k)?;
        let values = (0..1u64 << k).map(|m| f(LabelSet(m))).collect();
        Self::from_values(k, values)
    }

    /// μ(A) = |A| / K.
    pub fn additive_uniform(k: usize) -> Result<Self> {
        Self::from_fn(k, |a| a.len() as f64 / k as f64)
    }

    /// μ(A) = 1 only for the full label set.
    pub fn subset01(k: usize) -> Result<Self> {
        let full = LabelSet::full(k);
        Self::from_fn(k, |a| if a == full { 1.0 } else { 0.0 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, set: LabelSet) -> f64 {
        self.values[set.index()]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let mut by_size = vec![None; self.k + 1];
        self.values.iter().enumerate().all(|(m, &v)| {
            let slot = &mut by_size[(m as u64).count_ones() as usize];
            match *slot {
                None => {
                    *slot = Some(v);
                    true
                }
                Some(first) => (first - v).abs() <= tol,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// μ(∅) ≠ 0 or μ(C) ≠ 1.
    Boundary {
        subset: LabelSet,
        expected: f64,
        actual: f64,
    },
    /// μ(smaller) > μ(larger) although smaller ⊂ larger.
    Monotonicity {
        smaller: LabelSet,
        larger: LabelSet,
        smaller_value: f64,
        larger_value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Boundary {
                subset,
                expected,
                actual,
            } => write!(f, "boundary: mu({subset}) = {actual}, expected {expected}"),
            Violation::Monotonicity {
                smaller,
                larger,
                smaller_value,
                larger_value,
            } => write!(
                f,
                "monotonicity: mu({smaller}) = {smaller_value} > mu({larger}) = {larger_value}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// Checks normalization and monotonicity within `tol`.
///
/// Monotonicity is checked on covering pairs `A ⊂ A ∪ {i}`; every violating
/// pair is reported.
pub fn validate_capacity(cap: &Capacity, tol: f64) -> ValidationReport {
    let mut violations = Vec::new();
    let full = LabelSet::full(cap.k);
    let empty_value = cap.value(LabelSet::EMPTY);
    if empty_value.abs() > tol {
        violations.push(Violation::Boundary {
            subset: LabelSet::EMPTY,
            expected: 0.0,
            actual: empty_value,
        });
    }
    let full_value = cap.value(full);
    if (full_value - 1.0).abs() > tol {
        violations.push(Violation::Boundary {
            subset: full,
            expected: 1.0,
            actual: full_value,
        });
    }
    for (mask, &value) in cap.values.iter().enumerate() {
        let set = LabelSet(mask as u64);
        for bit in 0..cap.k {
            let larger = LabelSet(set.bits() | 1 << bit);
            if larger == set {
                continue;
            }
            let larger_value = cap.value(larger);
            if value > larger_value + tol {
                violations.push(Violation::Monotonicity {
                    smaller: set,
                    larger,
                    smaller_value: value,
                    larger_value,
                });
            }
        }
    }
    ValidationReport { violations }
}
