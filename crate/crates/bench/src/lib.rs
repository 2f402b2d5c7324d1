//! Benchmark fixtures shared by the criterion benches.

use meanslab::PositivePair;

/// Pairs spanning near-equal to extreme ratios.
pub fn fixture_pairs() -> Vec<PositivePair> {
    [1.0 + 1e-9, 1.0 + 1e-4, 1.5, 3.0, 1e3, 1e8]
        .into_iter()
        .map(|r| PositivePair::new(r, 1.0).expect("fixture pairs are positive"))
        .collect()
}
