//! Fixtures shared by the benchmarks.

use ffsym_core::{Key, ValidKeySampler};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `n` seeded keys at loop `L` that are not trivially zero.
pub fn valid_sample(loop_order: usize, n: usize, seed: u64) -> Vec<Key> {
    let sampler = ValidKeySampler::new(loop_order).expect("supported loop order");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}
