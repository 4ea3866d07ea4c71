//! Shared fixtures for the criterion benches.

use rand_chacha::ChaCha8Rng;
use uafa_core::bench::{random_chrobak, random_ufa};
use uafa_core::ChrobakNF;

/// A deterministic family of unambiguous automata of roughly `n` states.
pub fn ufa_family(seed: u64, n: usize, count: usize) -> Vec<ChrobakNF> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_ufa(&mut rng, n)).collect()
}

/// A deterministic family of Chrobak automata (no ambiguity constraint).
pub fn chrobak_family(seed: u64, n: usize, count: usize) -> Vec<ChrobakNF> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_chrobak(&mut rng, n)).collect()
}
