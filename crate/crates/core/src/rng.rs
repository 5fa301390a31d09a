//! Seeded random streams.
//!
//! Every stochastic routine takes an injected generator. Independent streams
//! are derived from a master seed and a stream id, so parallel work stays
//! reproducible regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `(master, stream)`.
pub fn stream(master: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

/// Stream id for cell `(n, index)` of an experiment grid.
pub fn cell_stream(n: usize, index: usize) -> u64 {
    ((n as u64) << 32) | index as u64
}
