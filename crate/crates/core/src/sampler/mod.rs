//! Random generation: exact two-stage uniform sampling, conditional
//! sampling on the exact overlap with `M`, a switch-move Markov chain and
//! per-sample censuses.
//!
//! All randomness comes from ChaCha8 streams. Sample `i` of a run with seed
//! `s` draws from stream `i` of the generator seeded with `s`, so a run's
//! output does not depend on how many worker threads produced it.

mod census;
mod chain;
mod exact;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use census::{block_census, overlap_statistic, partner_part_census, SampleRecord};
pub use chain::{apply_move, mcmc_switch_chain, ChainMove, SwitchChain};
pub use exact::{
    sample_conditional_stream, sample_uniform_stream, ConditionalSampler, UniformSampler, VectorSampler,
    DEFAULT_VECTOR_CAP,
};

use crate::error::{Error, Result};

/// The generator behind every sampler.
pub type SamplerRng = ChaCha8Rng;

/// Stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SamplerRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub sample_count: usize,
    /// Chain steps discarded before the first emitted state.
    pub burn_in: u64,
    /// Chain steps between emitted states.
    pub step_count: u64,
}

impl SamplerConfig {
    pub fn new(seed: u64, sample_count: usize) -> Self {
        Self { seed, sample_count, burn_in: 1000, step_count: 10 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::InvalidParameter("sample_count must be positive".into()));
        }
        if self.step_count == 0 {
            return Err(Error::InvalidParameter("step_count must be positive".into()));
        }
        Ok(())
    }
}
