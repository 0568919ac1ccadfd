//! Deterministic, splittable random-number streams.
//!
//! Every stochastic component draws from a [`ChaCha8Rng`] keyed by the
//! triple `(master_seed, replica_id, stream_id)` through a SplitMix64
//! expansion. A replica's randomness can therefore be regenerated in
//! isolation, independent of thread scheduling — the basis of the
//! bit-reproducibility contract.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream id for wavevector placement.
pub const STREAM_MODES: u64 = 0xA1;
/// Stream id for stationary amplitude initialization.
pub const STREAM_AMPLITUDES: u64 = 0xA2;
/// Stream id for the environment's Ornstein–Uhlenbeck refresh noise.
pub const STREAM_ENVIRONMENT: u64 = 0xA3;
/// Stream id for the particle's Brownian increments.
pub const STREAM_PARTICLE: u64 = 0xA4;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const REPLICA_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Collapses `(master_seed, replica_id, stream_id)` into one well-mixed
/// 64-bit sub-seed. Each argument passes through its own avalanche stage, so
/// structured inputs (consecutive replica ids, tiny seeds) still produce
/// unrelated streams.
pub fn subseed(master_seed: u64, replica_id: u64, stream_id: u64) -> u64 {
    let mut acc = mix(master_seed.wrapping_add(GOLDEN));
    acc = mix(acc ^ replica_id.wrapping_mul(REPLICA_SALT).wrapping_add(GOLDEN));
    mix(acc ^ stream_id.wrapping_mul(GOLDEN).wrapping_add(REPLICA_SALT))
}

/// Expands a 64-bit seed into a ChaCha8 generator via a SplitMix64 chain
/// over the 256-bit key.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN);
        chunk.copy_from_slice(&mix(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// The stream keyed by `(master_seed, replica_id, stream_id)`.
pub fn stream_rng(master_seed: u64, replica_id: u64, stream_id: u64) -> ChaCha8Rng {
    rng_from_seed(subseed(master_seed, replica_id, stream_id))
}
