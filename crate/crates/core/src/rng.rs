//! Seeded random streams for Monte Carlo trials.
//!
//! Generator: ChaCha8. A run seed is expanded into a 256-bit key once; trial
//! `i` reads ChaCha stream `i` under that key. Trial outcomes therefore
//! depend only on `(seed, i)` and not on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeedFamily {
    key: <ChaCha8Rng as SeedableRng>::Seed,
}

impl SeedFamily {
    pub fn new(seed: u64) -> Self {
        let mut root = ChaCha8Rng::seed_from_u64(seed);
        let mut key = <ChaCha8Rng as SeedableRng>::Seed::default();
        rand::RngCore::fill_bytes(&mut root, &mut key);
        Self { key }
    }

    /// Independent generator for trial `index`.
    pub fn trial(&self, index: u64) -> TrialRng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}
