//! Seeded, splittable randomness. Every random choice in the crate is drawn
//! from a ChaCha8 stream derived from one root seed, so runs are
//! reproducible from the seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Named stream ids used when splitting a root seed.
pub mod stream {
    pub const ORDERING: u64 = 1;
    pub const SPARSE_SET: u64 = 2;
    pub const SUBTRACTION: u64 = 3;
    pub const GENERATOR: u64 = 4;
    pub const GREEDY: u64 = 5;
}

/// Generator for stream `stream` of `seed`. Distinct streams of one seed
/// are independent.
pub fn split(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed for the `index`-th item of a sweep.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
