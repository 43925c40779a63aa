//! Seeded, splittable randomness.
//!
//! Every consumer draws from a ChaCha substream addressed by
//! `(master seed, stream id)`. ChaCha is counter based, so substreams are
//! independent and any one of them can be reconstructed without replaying
//! the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn substream(master: u64, stream_id: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream_id);
    rng
}

/// Substream used to generate the arrival order of trial `trial`.
pub fn stream_order_rng(master: u64, trial: u64) -> SimRng {
    substream(master, 2 * trial)
}

/// Substream driving the algorithm's own coin flips in trial `trial`.
pub fn algorithm_rng(master: u64, trial: u64) -> SimRng {
    substream(master, 2 * trial + 1)
}
