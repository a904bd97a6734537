//! The single seedable generator used everywhere randomness is needed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SkillRng = ChaCha8Rng;

/// Recorded in run reports so a run can be replayed with the same stream.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng::seed_from_u64 (rand_chacha 0.3)";

pub fn seeded_rng(seed: u64) -> SkillRng {
    ChaCha8Rng::seed_from_u64(seed)
}
