//! Seed derivation.
//!
//! Every run owns two random streams:
//!
//! * a policy stream, `ChaCha8Rng::seed_from_u64(stream_seed(base, policy, run))`,
//!   used by policies that randomize (Random, Independent UCB1 tie-breaks);
//! * an environment stream, `ChaCha8Rng::seed_from_u64(stream_seed(base,
//!   "environment", run))`, from which round `t` draws its Bernoulli trials
//!   on ChaCha stream number `t`.
//!
//! The environment stream does not depend on the policy, so all policies with
//! the same run index face the same coin flips (common random numbers), and
//! any two policies that pick the same allocation in round `t` see the same
//! outcome.
//!
//! `stream_seed` folds `base`, the label bytes (8 at a time, little-endian,
//! zero-padded), the label length and the run index through the SplitMix64
//! finalizer. The scheme is part of the output format: changing it changes
//! every result file.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Label of the environment stream; not a valid policy name.
pub const ENVIRONMENT_LABEL: &str = "environment";

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn absorb(state: u64, word: u64) -> u64 {
    splitmix64(state ^ splitmix64(word))
}

pub fn stream_seed(base_seed: u64, label: &str, run_index: u32) -> u64 {
    let mut h = splitmix64(base_seed);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        h = absorb(h, u64::from_le_bytes(word));
    }
    h = absorb(h, label.len() as u64);
    absorb(h, u64::from(run_index))
}

pub fn policy_rng(base_seed: u64, policy: &str, run_index: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(base_seed, policy, run_index))
}

/// Per-round environment randomness derived from one run's environment seed.
#[derive(Debug, Clone)]
pub struct EnvironmentStreams {
    base: ChaCha8Rng,
}

impl EnvironmentStreams {
    pub fn new(base_seed: u64, run_index: u32) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(stream_seed(base_seed, ENVIRONMENT_LABEL, run_index)),
        }
    }

    pub fn round(&self, round: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(round);
        rng
    }
}
