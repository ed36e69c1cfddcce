//! Seed derivation for reproducible parallel runs.
//!
//! Every parallel task (a shot, a Monte Carlo sample, a benchmark repetition)
//! gets its own ChaCha8 stream derived from a master seed and the task's
//! position. Results then depend only on the master seed, not on thread
//! scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer, used as a cheap mixing function with good avalanche.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Mixes a master seed with a sequence of indices into a new seed.
///
/// The fold is order-sensitive, so `mix(s, &[1, 2])` and `mix(s, &[2, 1])`
/// are unrelated streams.
pub fn mix(master: u64, parts: &[u64]) -> u64 {
    let mut acc = splitmix64(master);
    for &p in parts {
        acc = splitmix64(acc ^ splitmix64(p.wrapping_add(0xa076_1d64_78bd_642f)));
    }
    acc
}

/// ChaCha8 stream for the task at `parts` under `master`.
pub fn derive_rng(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(master, parts))
}
