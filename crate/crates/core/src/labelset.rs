//! Label subsets encoded as bitmasks: label `i` (1-based) is bit `i - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest label count a [`LabelSet`] can address.
pub const MAX_LABELS: usize = 64;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn full(k: usize) -> Self {
        assert!(k <= MAX_LABELS);
        if k == MAX_LABELS {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << k) - 1)
        }
    }

    /// Builds a set from 1-based label indices.
    pub fn from_labels(k: usize, labels: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &label in labels {
            if label == 0 || label > k {
                return Err(Error::InvalidParameter(format!(
                    "label {label} outside 1..={k}"
                )));
            }
            bits |= 1 << (label - 1);
        }
        Ok(LabelSet(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=MAX_LABELS).contains(&label) && self.0 & (1 << (label - 1)) != 0
    }

    pub fn is_subset_of(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn fits(self, k: usize) -> bool {
        self.is_subset_of(LabelSet::full(k))
    }

    /// 1-based labels in ascending order.
    pub fn labels(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(bit + 1)
        })
    }

    /// Zero-based positions of the members, ascending.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        self.labels().map(|l| l - 1)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, label) in self.labels().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}
