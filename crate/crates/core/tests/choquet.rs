mod common;

use capaloss::{
    choquet_counting, choquet_moebius, choquet_sorted, expand_counting, moebius_of, ValueVector,
};
use common::*;
use orders::permutations;
use proptest::prelude::*;
use rand::Rng;

mod orders {
    /// All permutations of 0..n (Heap's algorithm).
    pub fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut items: Vec<usize> = (0..n).collect();
        let mut out = vec![items.clone()];
        let mut c = vec![0; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    items.swap(0, i);
                } else {
                    items.swap(c[i], i);
                }
                out.push(items.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn routes_agree_with_level_set_oracle(seed in any::<u64>(), k in 1usize..=8) {
        let mut r = rng(seed);
        let cap = random_capacity(&mut r, k);
        let u = random_values(&mut r, k);
        let oracle = choquet_levels(u.as_slice(), |m| cap.values()[m as usize]);
        let sorted = choquet_sorted(&u, &cap).unwrap();
        let moeb = choquet_moebius(&u, &moebius_of(&cap).unwrap()).unwrap();
        prop_assert!((sorted - oracle).abs() <= 1e-10);
        prop_assert!((moeb - oracle).abs() <= 1e-10);

        let profile = random_profile(&mut r, k);
        let counting = choquet_counting(&u, &profile).unwrap();
        let oracle = choquet_levels(u.as_slice(), |m| profile.at(m.count_ones() as usize));
        prop_assert!((counting - oracle).abs() <= 1e-10);
        let dense = choquet_sorted(&u, &expand_counting(&profile).unwrap()).unwrap();
        prop_assert!((dense - counting).abs() <= 1e-10);
    }

    #[test]
    fn bounds_idempotence_monotonicity(seed in any::<u64>(), k in 1usize..=8, c in 0.0f64..1.0) {
        let mut r = rng(seed);
        let cap = random_capacity(&mut r, k);
        let u = random_values(&mut r, k);
        let value = choquet_sorted(&u, &cap).unwrap();
        let lo = u.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = u.as_slice().iter().copied().fold(0.0, f64::max);
        prop_assert!(lo - 1e-12 <= value && value <= hi + 1e-12);

        let constant = ValueVector::new(vec![c; k]).unwrap();
        prop_assert!((choquet_sorted(&constant, &cap).unwrap() - c).abs() <= 1e-12);

        let bumped = ValueVector::new(
            u.as_slice().iter().map(|&x| x + r.gen::<f64>() * 0.3).collect(),
        ).unwrap();
        prop_assert!(choquet_sorted(&bumped, &cap).unwrap() >= value - 1e-12);
    }

    #[test]
    fn comonotone_additivity_for_counting(seed in any::<u64>(), k in 1usize..=8) {
        let mut r = rng(seed);
        let profile = random_profile(&mut r, k);
        let u = random_values(&mut r, k);
        // v shares u's ordering: a non-decreasing function of u
        let scale = r.gen::<f64>();
        let v = ValueVector::new(u.as_slice().iter().map(|&x| scale * x * x).collect()).unwrap();
        let sum = ValueVector::new(u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a + b).collect()).unwrap();
        let lhs = choquet_counting(&sum, &profile).unwrap();
        let rhs = choquet_counting(&u, &profile).unwrap() + choquet_counting(&v, &profile).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }
}

#[test]
fn tie_invariance_over_all_orders() {
    let mut r = rng(11);
    for _ in 0..50 {
        let k = 5;
        let cap = random_capacity(&mut r, k);
        // heavy ties
        let base: Vec<f64> = (0..k).map(|_| r.gen_range(0..3) as f64 / 2.0).collect();
        for perm in permutations(k) {
            let u = ValueVector::new(perm.iter().map(|&i| base[i]).collect()).unwrap();
            // relabel the capacity the same way so the integrals are comparable
            let cap_perm = capaloss::Capacity::from_fn(k, |s| {
                let original = s.positions().fold(0u64, |acc, p| acc | 1 << perm[p]);
                cap.values()[original as usize]
            })
            .unwrap();
            let reference = choquet_sorted(&ValueVector::new(base.clone()).unwrap(), &cap).unwrap();
            let got = choquet_sorted(&u, &cap_perm).unwrap();
            assert!((got - reference).abs() <= 1e-12);
        }
        // equal entries swapped in place leave the value unchanged
        let u = ValueVector::new(base.clone()).unwrap();
        let direct = choquet_sorted(&u, &cap).unwrap();
        let oracle = choquet_levels(&base, |m| cap.values()[m as usize]);
        assert!((direct - oracle).abs() <= 1e-12);
    }
}
