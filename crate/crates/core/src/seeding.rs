//! Deterministic seed derivation for parallel substreams.
//!
//! Every stochastic routine in this crate is driven by ChaCha8 (the 8-round
//! ChaCha stream cipher as implemented by `rand_chacha`), which produces
//! identical streams on every platform. Independent substreams — one per
//! permutation replicate, per simulation cell, per generated dataset — are
//! obtained by folding integer tags into the master seed with the SplitMix64
//! finalizer, then seeding a fresh ChaCha8 generator from the derived value.
//! Results are therefore independent of how work is scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 output (finalizer) function.
#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a substream seed from a master seed and a list of integer tags.
///
/// The same (seed, tags) pair always yields the same value; distinct tag
/// paths yield statistically independent values.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &tag in tags {
        state = splitmix64(state ^ splitmix64(tag));
    }
    state
}

/// A ChaCha8 generator for the substream identified by (master, tags).
pub fn substream_rng(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tags))
}
