//! Deterministic seed derivation for independent chains.
//!
//! Each chain's seed is a splitmix64-style hash of the master seed and the
//! chain's identity (sampler, step size, chain index), so adding chains or
//! grid points never perturbs the streams of existing ones, and results
//! are independent of scheduling.

use hmala::samplers::SamplerKind;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes the master seed with an arbitrary list of identity words.
pub fn mix_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}

fn sampler_id(kind: SamplerKind) -> u64 {
    match kind {
        SamplerKind::RandomWalk => 1,
        SamplerKind::Mala => 2,
        SamplerKind::Hmala => 3,
    }
}

/// Seed for one chain of a sweep.
pub fn chain_seed(master: u64, kind: SamplerKind, delta: f64, chain_index: u64) -> u64 {
    mix_seed(master, &[sampler_id(kind), delta.to_bits(), chain_index])
}
