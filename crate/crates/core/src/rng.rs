//! Seeded, splittable random streams.
//!
//! Every run owns one base seed. Independent streams (per offspring pair, per
//! Monte Carlo run, ...) are derived from the base seed and a path of integer
//! labels, so the draws a consumer sees never depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GaRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a path of labels into a new 64-bit seed.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |h, &label| splitmix64(h ^ splitmix64(label)))
}

pub fn seeded(seed: u64) -> GaRng {
    GaRng::seed_from_u64(seed)
}

/// Independent stream labelled by `path` under `base`.
pub fn substream(base: u64, path: &[u64]) -> GaRng {
    seeded(derive_seed(base, path))
}

/// Stream labels used by the engine and the studies.
pub mod label {
    pub const INIT: u64 = 1;
    pub const SELECTION: u64 = 2;
    pub const OFFSPRING: u64 = 3;
    pub const OPTIMA: u64 = 4;
    pub const POOL: u64 = 5;
    pub const RUN: u64 = 6;
}
