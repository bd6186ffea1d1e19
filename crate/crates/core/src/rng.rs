//! Deterministic randomness.
//!
//! Every random draw in this crate comes from a `ChaCha8Rng` seeded with a
//! 64-bit seed, so the same seed yields the same bits on every platform.
//! Range and subset sampling are implemented directly on the raw bit stream
//! rather than through a distributions crate, which pins outputs across
//! dependency upgrades. Parallel or repeated consumers derive independent
//! generators from one master seed via the ChaCha stream counter (see
//! [`seeded_stream`]); that is the documented split rule.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The generator behind every seeded operation in this crate.
pub type Rng = ChaCha8Rng;

/// Master generator for `seed` (stream 0).
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the generator for `seed`.
pub fn seeded_stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One fair coin flip.
pub fn coin(rng: &mut Rng) -> bool {
    rng.next_u32() & 1 == 1
}

/// Uniform draw from `0..bound`, unbiased via rejection sampling.
pub fn draw_below(rng: &mut Rng, bound: u64) -> u64 {
    assert!(bound > 0, "draw_below: empty range");
    if bound == 1 {
        return 0;
    }
    // Reject the low `2^64 mod bound` values so the remainder is uniform.
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % bound;
        }
    }
}

/// Draws `size` distinct elements of `pool` (partial Fisher-Yates), ascending.
pub fn sample_distinct(rng: &mut Rng, pool: &[usize], size: usize) -> Vec<usize> {
    assert!(size <= pool.len(), "sample_distinct: size exceeds pool");
    let mut scratch: Vec<usize> = pool.to_vec();
    for i in 0..size {
        let j = i + draw_below(rng, (scratch.len() - i) as u64) as usize;
        scratch.swap(i, j);
    }
    scratch.truncate(size);
    scratch.sort_unstable();
    scratch
}
