//! Shared inputs for the criterion benches.

use dbar_core::{random, CoeffField};

/// Seeded random Hermite field of the given truncation.
pub fn fixture_field(seed: u64, m_max: usize, n_max: usize) -> CoeffField {
    let mut rng = random::trial_rng(seed, 0);
    random::random_field(&mut rng, m_max, n_max)
}
