//! Non-additive measures (capacities) on label subsets and their encodings.
//!
//! A capacity can be held densely ([`Capacity`], one value per subset), as a
//! sparse Möbius transform ([`MoebiusRepresentation`]), or, when it only
//! depends on subset cardinality, as a [`CountingProfile`]. Subsets are
//! [`LabelSet`](crate::LabelSet) bitmasks with label `i` stored in bit `i-1`.

mod capacity;
mod file;
mod moebius;
mod profile;

pub use capacity::{validate_capacity, Capacity, ValidationReport, Violation};
pub use file::{
    format_capacity, format_counting, format_moebius, parse_measure, read_measure_file,
    MeasureSource,
};
pub use moebius::{
    additivity_order, capacity_from_covering, capacity_of, capacity_of_with_tol, moebius_of,
    MoebiusRepresentation,
};
pub use profile::{expand_counting, owa_weights, CountingProfile, OwaWeights};

/// Largest label count for which a capacity is stored densely (2^K values).
pub const DENSE_CAP: usize = 20;

/// Default tolerance for the capacity axioms.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Möbius masses at or below this magnitude are treated as zero.
pub const MOEBIUS_ZERO_TOL: f64 = 1e-14;

/// Numerical noise allowed on OWA weights before they count as negative.
pub const WEIGHT_NOISE: f64 = 1e-15;

pub(crate) fn check_dense(k: usize) -> crate::Result<()> {
    if k > DENSE_CAP {
        return Err(crate::Error::TooManyLabels {
            k,
            cap: DENSE_CAP,
            what: "dense capacities",
        });
    }
    Ok(())
}
