//! Per-drop random streams.
//!
//! Every drop owns independent ChaCha8 streams derived statelessly from
//! `(master seed, drop index, attempt)`, one per pipeline stage. Results do not
//! depend on which thread evaluates a drop or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Geometry = 0,
    Shadowing = 1,
    SmallScale = 2,
    PilotNoise = 3,
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stage_rng(master_seed: u64, drop_index: u64, attempt: u32, stage: Stage) -> ChaCha8Rng {
    let mut state = splitmix64(master_seed);
    state = splitmix64(state ^ drop_index);
    state = splitmix64(state ^ u64::from(attempt));
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(stage as u64);
    rng
}
