mod common;

use capaloss::measures::{format_capacity, format_moebius, parse_measure, MeasureSource};
use capaloss::{
    additivity_order, capacity_of, expand_counting, moebius_of, owa_weights, validate_capacity,
    CountingProfile,
};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moebius_matches_submask_enumeration(seed in any::<u64>(), k in 1usize..=8) {
        let cap = random_capacity(&mut rng(seed), k);
        let moeb = moebius_of(&cap).unwrap();
        let brute = moebius_brute(&cap);
        for (mask, &m) in brute.iter().enumerate().skip(1) {
            let got = moeb.mass(capaloss::LabelSet(mask as u64));
            prop_assert!((got - m).abs() <= 1e-12, "mask {}: {} vs {}", mask, got, m);
        }
    }

    #[test]
    fn round_trip_and_normalization(seed in any::<u64>(), k in 1usize..=10) {
        let cap = random_capacity(&mut rng(seed), k);
        prop_assert!(validate_capacity(&cap, 0.0).is_valid());
        let moeb = moebius_of(&cap).unwrap();
        prop_assert!((moeb.total_mass() - 1.0).abs() <= 1e-12);
        let back = capacity_of(&moeb).unwrap();
        for (a, b) in cap.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn owa_weights_are_a_distribution(seed in any::<u64>(), k in 1usize..=40) {
        let w = owa_weights(&random_profile(&mut rng(seed), k));
        prop_assert!(w.weights().iter().all(|&x| x >= 0.0));
        prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn families_are_pointwise_monotone(k in 2usize..=30, a in 1.0f64..500.0, step in 0.0f64..500.0) {
        let low = CountingProfile::polynomial(k, a).unwrap();
        let high = CountingProfile::polynomial(k, a + step).unwrap();
        for j in 1..k {
            prop_assert!(high.at(j) <= low.at(j));
        }
        for order in 1..k {
            let p = CountingProfile::binomial(k, order).unwrap();
            let q = CountingProfile::binomial(k, order + 1).unwrap();
            for j in 1..k {
                prop_assert!(q.at(j) <= p.at(j));
            }
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), k in 1usize..=6) {
        let cap = random_capacity(&mut rng(seed), k);
        let parsed = parse_measure(&format_capacity(&cap), "t").unwrap();
        prop_assert_eq!(parsed, MeasureSource::Capacity(cap.clone()));
        let moeb = moebius_of(&cap).unwrap();
        let parsed = parse_measure(&format_moebius(&moeb), "t").unwrap();
        prop_assert_eq!(parsed, MeasureSource::Moebius(moeb));
    }
}

#[test]
fn binomial_family_has_matching_additivity_order() {
    for k in 1..=8 {
        for order in 1..=k {
            let cap = expand_counting(&CountingProfile::binomial(k, order).unwrap()).unwrap();
            let moeb = moebius_of(&cap).unwrap();
            assert_eq!(additivity_order(&moeb, 1e-12), order, "K={k} k={order}");
        }
    }
}

#[test]
fn binomial_one_equals_polynomial_one() {
    for k in 1..=64 {
        assert_eq!(
            CountingProfile::binomial(k, 1).unwrap(),
            CountingProfile::polynomial(k, 1.0).unwrap()
        );
    }
}
