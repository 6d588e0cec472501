//! Shared inputs for the benchmarks.

use lindeberg_core::{DiscreteDistribution, SumContext};

/// `n` copies of an asymmetric three-point law.
pub fn three_point_context(n: usize) -> SumContext {
    let d = DiscreteDistribution::new(&[(-1.0, 0.5), (0.3, 0.25), (1.7, 0.25)]).expect("centered");
    SumContext::iid(&d, n).expect("positive variance")
}

/// `n` summands with slightly different scales, so partial sums rarely merge.
pub fn spread_context(n: usize) -> SumContext {
    let summands = (0..n)
        .map(|k| {
            let s = 1.0 + 0.01 * k as f64;
            DiscreteDistribution::new(&[(-s, 0.25), (0.0, 0.5), (s, 0.25)]).expect("centered")
        })
        .collect();
    SumContext::new(summands).expect("positive variance")
}
