//! Fixtures shared by the criterion benches.

use qpure_core::random::random_state;
use qpure_core::PureState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded Haar-like random state on `n` qubits.
pub fn fixture_state(n: usize, seed: u64) -> PureState {
    random_state(n, &mut ChaCha8Rng::seed_from_u64(seed)).expect("n >= 1")
}
