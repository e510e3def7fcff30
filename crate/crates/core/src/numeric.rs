//! Small numeric helpers shared by the aggregation routes.

/// Vectors longer than this are summed with Neumaier compensation.
pub const COMPENSATION_THRESHOLD: usize = 64;

/// Sums `values` left to right. Sequences longer than
/// [`COMPENSATION_THRESHOLD`] use compensated summation; either way the
/// order is fixed so the result does not depend on the calling context.
pub fn ordered_sum<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: ExactSizeIterator,
{
    let iter = values.into_iter();
    if iter.len() <= COMPENSATION_THRESHOLD {
        iter.fold(0.0, |acc, x| acc + x)
    } else {
        neumaier_sum(iter)
    }
}

pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Exact binomial coefficient, or `None` on `u128` overflow.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// C(j, k) / C(n, k) for j <= n.
pub fn binomial_ratio(j: u64, n: u64, k: u64) -> f64 {
    debug_assert!(j <= n && k <= n);
    if k > j {
        return 0.0;
    }
    match (binomial_exact(j, k), binomial_exact(n, k)) {
        (Some(num), Some(den)) => num as f64 / den as f64,
        // Product form: prod_{i<k} (j - i) / (n - i)
        _ => (0..k).fold(1.0, |acc, i| acc * (j - i) as f64 / (n - i) as f64),
    }
}
