//! Seed derivation for the deterministic run hierarchy.
//!
//! Every random decision in the workbench draws from a `ChaCha8Rng` whose
//! 64-bit seed is derived from its parent seed through `splitmix64`. The
//! hierarchy is `master -> run -> generation -> (trial | mutation | init)`,
//! so any subtree can be replayed in isolation and results never depend on
//! thread count or evaluation order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags keep sibling streams apart even when their indices collide.
const DOMAIN_RUN: u64 = 0x9ea5_0c53_1b3d_0001;
const DOMAIN_GENERATION: u64 = 0x9ea5_0c53_1b3d_0002;
const DOMAIN_TRIAL: u64 = 0x9ea5_0c53_1b3d_0003;
const DOMAIN_MUTATION: u64 = 0x9ea5_0c53_1b3d_0004;
const DOMAIN_INIT: u64 = 0x9ea5_0c53_1b3d_0005;
const DOMAIN_WORLD: u64 = 0x9ea5_0c53_1b3d_0006;
const DOMAIN_DECODE: u64 = 0x9ea5_0c53_1b3d_0007;
const DOMAIN_CROSS_TEST: u64 = 0x9ea5_0c53_1b3d_0008;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` within a tagged domain.
pub fn child_seed(parent: u64, domain: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(domain ^ splitmix64(index)))
}

pub fn run_seed(master_seed: u64, run_index: u64) -> u64 {
    child_seed(master_seed, DOMAIN_RUN, run_index)
}

pub fn generation_seed(run_seed: u64, generation: u64) -> u64 {
    child_seed(run_seed, DOMAIN_GENERATION, generation)
}

/// Seed for trial `trial` of generation `generation_seed`. Under common
/// trials the same seed is shared by the whole population; otherwise each
/// individual derives its own by packing its index into the high bits.
pub fn trial_seed(generation_seed: u64, individual: Option<u64>, trial: u64) -> u64 {
    let index = match individual {
        Some(i) => (i << 32) | trial,
        None => trial,
    };
    child_seed(generation_seed, DOMAIN_TRIAL, index)
}

pub fn mutation_seed(generation_seed: u64) -> u64 {
    child_seed(generation_seed, DOMAIN_MUTATION, 0)
}

pub fn init_seed(run_seed: u64) -> u64 {
    child_seed(run_seed, DOMAIN_INIT, 0)
}

pub fn world_seed(trial_seed: u64) -> u64 {
    child_seed(trial_seed, DOMAIN_WORLD, 0)
}

pub fn decode_seed(trial_seed: u64) -> u64 {
    child_seed(trial_seed, DOMAIN_DECODE, 0)
}

pub fn cross_test_seed(base_seed: u64, trial: u64) -> u64 {
    child_seed(base_seed, DOMAIN_CROSS_TEST, trial)
}

/// The stream cipher behind every drawn value.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
