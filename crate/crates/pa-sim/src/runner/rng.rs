//! Deterministic per-trial random streams.
//!
//! Every Monte Carlo trial owns an independent ChaCha stream derived from
//! (master_seed, trial_index), so results do not depend on worker count or
//! scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for one trial. Same inputs always give the same stream.
pub fn derive_stream(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    derive_substream(master_seed, 0, trial_index)
}

/// Stream addressed by (tag, index); tags partition the 64-bit stream space
/// so auxiliary sampling (e.g. empirical-tail construction) never collides
/// with trial streams. Requires index < 2^48.
pub fn derive_substream(master_seed: u64, tag: u16, index: u64) -> ChaCha8Rng {
    debug_assert!(index < (1u64 << 48));
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((tag as u64) << 48) | index);
    rng
}
