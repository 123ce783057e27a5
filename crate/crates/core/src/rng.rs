//! Seed derivation. Every random draw in the crate goes through a ChaCha8
//! stream keyed by `(seed, stream)`, so results do not depend on platform or
//! thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

// Stream tags keep independent consumers of one seed apart.
pub(crate) const STREAM_SAMPLE_NODES: u64 = 1;
pub(crate) const STREAM_HOLDOUT: u64 = 2;
pub(crate) const STREAM_NOISE: u64 = 3;
pub(crate) const STREAM_EDGE_REMOVAL: u64 = 4;
pub(crate) const STREAM_LABEL_REMOVAL: u64 = 5;
pub(crate) const STREAM_SPLIT: u64 = 6;
pub(crate) const STREAM_WORLDS: u64 = 7;
pub(crate) const STREAM_CLASSIFIER: u64 = 8;
pub(crate) const STREAM_SYNTH_GRAPH: u64 = 9;
pub(crate) const STREAM_SYNTH_LABELS: u64 = 10;

pub fn rng_for(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for sub-task `index` of a run seeded with `seed` (splitmix64 step).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
