use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_dense, validate_capacity, Capacity, DEFAULT_TOL, MOEBIUS_ZERO_TOL};
use crate::error::{Error, Result};
use crate::labelset::{LabelSet, MAX_LABELS};

/// Sparse Möbius transform of a capacity: the mass allocated exclusively to
/// each subset. Absent subsets carry zero mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoebiusRepresentation {
    k: usize,
    masses: BTreeMap<LabelSet, f64>,
}

impl MoebiusRepresentation {
    /// Collects masses, merging duplicate subsets by summation.
    ///
    /// Fails if a subset falls outside the `k` labels, the empty set carries
    /// mass, or the masses do not sum to 1 within [`DEFAULT_TOL`].
    pub fn new(k: usize, masses: impl IntoIterator<Item = (LabelSet, f64)>) -> Result<Self> {
        if k == 0 || k > MAX_LABELS {
            return Err(Error::InvalidParameter(format!(
                "K must lie in 1..={MAX_LABELS}, got {k}"
            )));
        }
        let mut merged: BTreeMap<LabelSet, f64> = BTreeMap::new();
        for (set, mass) in masses {
            if !set.fits(k) {
                return Err(Error::InvalidParameter(format!(
                    "subset {set} outside the {k} labels"
                )));
            }
            if !mass.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite mass on {set}")));
            }
            if set.is_empty() {
                if mass.abs() > MOEBIUS_ZERO_TOL {
                    return Err(Error::InvalidInput(
                        "the empty set cannot carry mass".into(),
                    ));
                }
                continue;
            }
            *merged.entry(set).or_insert(0.0) += mass;
        }
        merged.retain(|_, m| m.abs() > MOEBIUS_ZERO_TOL);
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidInput(format!(
                "Möbius masses sum to {total}, expected 1"
            )));
        }
        Ok(MoebiusRepresentation { k, masses: merged })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn masses(&self) -> &BTreeMap<LabelSet, f64> {
        &self.masses
    }

    pub fn mass(&self, set: LabelSet) -> f64 {
        self.masses.get(&set).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

/// In-place subset-sum (zeta) transform over a dense 2^K table.
fn zeta_in_place(values: &mut [f64]) {
    let n = values.len();
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit != 0 {
                values[mask] += values[mask ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`zeta_in_place`].
fn moebius_in_place(values: &mut [f64]) {
    let n = values.len();
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit != 0 {
                values[mask] -= values[mask ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// m(A) = Σ_{B ⊆ A} (−1)^{|A \ B|} μ(B), dropping masses with
/// |m(A)| ≤ [`MOEBIUS_ZERO_TOL`].
///
/// The total mass is not re-checked here: it equals μ(C) up to rounding, so
/// a capacity that fails normalization yields a representation whose masses
/// do not sum to 1.
pub fn moebius_of(cap: &Capacity) -> Result<MoebiusRepresentation> {
    check_dense(cap.k())?;
    let mut table = cap.values().to_vec();
    moebius_in_place(&mut table);
    let masses = table
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|(_, m)| m.abs() > MOEBIUS_ZERO_TOL)
        .map(|(mask, m)| (LabelSet(mask as u64), m))
        .collect();
    Ok(MoebiusRepresentation { k: cap.k(), masses })
}

/// μ(B) = Σ_{A ⊆ B} m(A), validated against the capacity axioms at
/// [`DEFAULT_TOL`].
pub fn capacity_of(moeb: &MoebiusRepresentation) -> Result<Capacity> {
    capacity_of_with_tol(moeb, DEFAULT_TOL)
}

pub fn capacity_of_with_tol(moeb: &MoebiusRepresentation, tol: f64) -> Result<Capacity> {
    check_dense(moeb.k)?;
    let mut table = vec![0.0; 1 << moeb.k];
    for (set, &mass) in &moeb.masses {
        table[set.index()] = mass;
    }
    zeta_in_place(&mut table);
    let cap = Capacity::from_values(moeb.k, table)?;
    let report = validate_capacity(&cap, tol);
    if report.is_valid() {
        Ok(cap)
    } else {
        Err(Error::InvalidMeasure(report))
    }
}

/// Smallest `k` such that every subset larger than `k` has |m| ≤ `tol`.
pub fn additivity_order(moeb: &MoebiusRepresentation, tol: f64) -> usize {
    moeb.masses
        .iter()
        .filter(|(_, m)| m.abs() > tol)
        .map(|(set, _)| set.len())
        .max()
        .unwrap_or(0)
}

/// Möbius representation of a covering error: each subset of the covering
/// receives mass proportional to its weight (uniform by default).
pub fn capacity_from_covering(
    k: usize,
    covering: &[LabelSet],
    weights: Option<&[f64]>,
) -> Result<MoebiusRepresentation> {
    if covering.is_empty() {
        return Err(Error::InvalidParameter("covering must not be empty".into()));
    }
    if let Some(w) = weights {
        if w.len() != covering.len() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} covering subsets",
                w.len(),
                covering.len()
            )));
        }
        if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "covering weights must be positive, got {bad}"
            )));
        }
    }
    if covering.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidParameter(
            "covering subsets must be non-empty".into(),
        ));
    }
    let weight = |i: usize| weights.map_or(1.0, |w| w[i]);
    let total: f64 = (0..covering.len()).map(weight).sum();
    let moeb = MoebiusRepresentation::new(
        k,
        covering
            .iter()
            .enumerate()
            .map(|(i, &set)| (set, weight(i) / total)),
    )?;
    // non-negative masses always induce a monotone capacity
    debug_assert!(k > super::DENSE_CAP || capacity_of(&moeb).is_ok());
    Ok(moeb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{expand_counting, CountingProfile};

    fn set(labels: &[usize]) -> LabelSet {
        LabelSet::from_labels(64, labels).unwrap()
    }

    #[test]
    fn additive_measure_has_singleton_masses() {
        let moeb = moebius_of(&Capacity::additive_uniform(2).unwrap()).unwrap();
        assert_eq!(moeb.mass(set(&[1])), 0.5);
        assert_eq!(moeb.mass(set(&[2])), 0.5);
        assert_eq!(moeb.mass(set(&[1, 2])), 0.0);
        assert_eq!(moeb.len(), 2);
        assert_eq!(additivity_order(&moeb, 1e-12), 1);
    }

    #[test]
    fn subset01_measure_is_concentrated_on_full_set() {
        let moeb = moebius_of(&Capacity::subset01(2).unwrap()).unwrap();
        assert_eq!(
            moeb.masses().iter().collect::<Vec<_>>(),
            vec![(&set(&[1, 2]), &1.0)]
        );
        let moeb4 = moebius_of(&Capacity::subset01(4).unwrap()).unwrap();
        assert_eq!(additivity_order(&moeb4, 1e-12), 4);
    }

    #[test]
    fn capacity_of_uniform_singletons() {
        let moeb = MoebiusRepresentation::new(2, [(set(&[1]), 0.5), (set(&[2]), 0.5)]).unwrap();
        let cap = capacity_of(&moeb).unwrap();
        assert_eq!(cap, Capacity::additive_uniform(2).unwrap());
    }

    #[test]
    fn covering_of_pairs_k5() {
        // every 2-subset gets 1/10; mu(B) = C(|B|,2)/10
        let pairs: Vec<LabelSet> = (1..=5)
            .flat_map(|a| (a + 1..=5).map(move |b| set(&[a, b])))
            .collect();
        let moeb = capacity_from_covering(5, &pairs, None).unwrap();
        let cap = capacity_of(&moeb).unwrap();
        for (mask, &v) in cap.values().iter().enumerate() {
            let n = (mask as u32).count_ones() as f64;
            let expected = n * (n - 1.0) / 2.0 / 10.0;
            assert!(
                (v - expected).abs() < 1e-15,
                "mask {mask}: {v} vs {expected}"
            );
        }
        assert_eq!(additivity_order(&moeb, 1e-12), 2);
    }

    #[test]
    fn binomial_expansion_is_uniform_on_k_subsets() {
        let cap = expand_counting(&CountingProfile::binomial(5, 2).unwrap()).unwrap();
        let moeb = moebius_of(&cap).unwrap();
        assert_eq!(moeb.len(), 10);
        for (s, &m) in moeb.masses() {
            assert_eq!(s.len(), 2);
            assert!((m - 0.1).abs() < 1e-15);
        }
        assert_eq!(additivity_order(&moeb, 1e-12), 2);
    }

    #[test]
    fn covering_singletons_and_full_set() {
        let singletons: Vec<LabelSet> = (1..=4).map(|i| set(&[i])).collect();
        let hamming = capacity_of(&capacity_from_covering(4, &singletons, None).unwrap()).unwrap();
        assert_eq!(hamming, Capacity::additive_uniform(4).unwrap());
        let full =
            capacity_of(&capacity_from_covering(4, &[LabelSet::full(4)], None).unwrap()).unwrap();
        assert_eq!(full, Capacity::subset01(4).unwrap());
    }

    #[test]
    fn covering_two_blocks() {
        let moeb = capacity_from_covering(4, &[set(&[1, 2]), set(&[3, 4])], None).unwrap();
        let cap = capacity_of(&moeb).unwrap();
        assert_eq!(cap.value(set(&[1, 2])), 0.5);
        assert_eq!(cap.value(set(&[3, 4])), 0.5);
        assert_eq!(cap.value(set(&[1, 2, 3])), 0.5);
        assert_eq!(cap.value(set(&[1, 3])), 0.0);
        assert_eq!(cap.value(LabelSet::full(4)), 1.0);
    }

    #[test]
    fn covering_weights_and_duplicates() {
        let moeb = capacity_from_covering(
            3,
            &[set(&[1]), set(&[1]), set(&[2, 3])],
            Some(&[1.0, 1.0, 2.0]),
        )
        .unwrap();
        assert_eq!(moeb.mass(set(&[1])), 0.5);
        assert_eq!(moeb.mass(set(&[2, 3])), 0.5);
        assert!(capacity_from_covering(3, &[], None).is_err());
        assert!(capacity_from_covering(3, &[LabelSet::EMPTY], None).is_err());
        assert!(capacity_from_covering(3, &[set(&[1])], Some(&[0.0])).is_err());
        assert!(capacity_from_covering(3, &[set(&[1])], Some(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn non_monotone_masses_surface_validation_failure() {
        // m({1}) = 1.5, m({1,2}) = -0.5 -> mu({1}) = 1.5 > mu({1,2}) = 1
        let moeb = MoebiusRepresentation::new(2, [(set(&[1]), 1.5), (set(&[1, 2]), -0.5)]).unwrap();
        assert!(matches!(capacity_of(&moeb), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn representation_errors() {
        assert!(MoebiusRepresentation::new(2, [(set(&[1]), 0.5)]).is_err());
        assert!(MoebiusRepresentation::new(2, [(set(&[3]), 1.0)]).is_err());
        assert!(MoebiusRepresentation::new(2, [(LabelSet::EMPTY, 0.5), (set(&[1]), 0.5)]).is_err());
        let big = MoebiusRepresentation::new(30, [(LabelSet::full(30), 1.0)]).unwrap();
        assert!(matches!(
            capacity_of(&big),
            Err(Error::TooManyLabels { .. })
        ));
    }
}
