//! Hierarchical deterministic random streams.
//!
//! Every trial gets its own generator seeded from the master seed and the
//! trial's coordinates, so trials can run in any order or in parallel and
//! still see identical randomness. The coordinates are folded together with
//! SplitMix64, whose avalanche keeps nearby coordinates uncorrelated.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// One SplitMix64 scramble step.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds coordinate parts into one stream id; order-sensitive.
pub fn derive_stream(master: u64, parts: &[u64]) -> u64 {
    let mut acc = splitmix64(master);
    for &p in parts {
        acc = splitmix64(acc ^ splitmix64(p));
    }
    acc
}

/// Generator for the stream at the given coordinates.
pub fn rng_for(master: u64, parts: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_stream(master, parts))
}
