//! Seeded randomness.
//!
//! Every random draw in the crate comes from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, which is stable across platforms and
//! releases of `rand_chacha` 0.3. Independent consumers of one user seed use
//! distinct ChaCha stream ids so they never share generator state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Stream ids for the independent consumers of a single seed.
pub mod stream {
    pub const RANDOMIZER: u64 = 0;
    pub const MAIN_CHANNEL: u64 = 1;
    pub const WIRETAP: u64 = 2;
    pub const SAMPLING: u64 = 3;
    pub const PAYLOAD: u64 = 4;
}

pub fn seeded(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
