//! Seeded random streams.
//!
//! Every trial draws from its own ChaCha8 stream, keyed by a 64-bit substream
//! seed derived from `(master_seed, cell, trial)` with the SplitMix64 finalizer.
//! Substreams do not depend on scheduling, so results are identical for any
//! worker count. The generator crates are pinned in the workspace manifest.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream_seed(master: u64, cell: u64, trial: u64) -> u64 {
    let h = mix64(master);
    let h = mix64(h ^ cell.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    mix64(h ^ trial.wrapping_mul(0xA076_1D64_78BD_642F))
}

/// Independent child seed for a named purpose within one trial.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag))
}

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}
