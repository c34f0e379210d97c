//! Reproducible randomness. ChaCha8 is a counter-based stream cipher, so
//! (seed, stream) pairs give platform-stable, independently addressable
//! random streams; every Monte Carlo trial owns stream = trial index.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
