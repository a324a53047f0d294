//! Synthetic inputs shared by the benchmarks.

use gdba_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` samples with `d` features drawn uniformly from `[-2, 2)`.
pub fn uniform_dataset(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    Dataset::from_rows(&rows).expect("finite samples")
}
