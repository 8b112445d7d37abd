//! Seeded simulation of the exact Wishart and CCA models.
//!
//! Replicate `i` draws from its own ChaCha8 stream: the generator seeded with
//! `master_seed`, switched to stream `i`. Results are gathered in replicate
//! order, so any thread count gives bit-identical output.

mod designs;
mod dump;
mod perturb;
mod sim;
mod summary;

pub use designs::{
    manova_noncentrality, regression_noncentrality, GroupDesign, Noncentrality, RegressionDesign, RANK_ONE_TOL,
};
pub use dump::{read_dump, write_dump};
pub use perturb::{perturbation_check, Perturbation};
pub use sim::{
    pillai_trace, roy_largest_root, sample_bartlett_factor, sample_wishart, simulate_cca, simulate_groups, simulate_l1,
    simulate_roy_pillai, RoyPillai, SimResult, CCA_CONDITION_LIMIT,
};
pub use summary::{
    empirical_quantile, empirical_summary, ks_distance, ks_two_sample, Exceedance, QuantileEstimate, Summary,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Replicate count and master seed of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimConfig {
    pub replicates: u64,
    pub master_seed: u64,
}

impl SimConfig {
    pub fn new(replicates: u64, master_seed: u64) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        Ok(SimConfig {
            replicates,
            master_seed,
        })
    }

    /// Generator for replicate `index`; depends only on
    /// `(master_seed, index)`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(index);
        rng
    }

    /// Runs `f` once per replicate, in parallel, returning results in
    /// replicate order.
    pub fn run<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
    {
        (0..self.replicates)
            .into_par_iter()
            .map(|i| f(&mut self.rng(i)))
            .collect()
    }
}
