//! Exact big-integer counting for complete multipartite graphs.

mod census;
pub mod combinatorics;
mod lattice;
mod ratio;
mod strata;

use num_bigint::BigUint;

pub use census::{lattice_cell_census, CellCount, CensusReport, LatticeCellConfig};
pub use lattice::{enumerate_vectors, for_each_vector, weight, weighted_vectors};
pub use ratio::{predicted_ratio, ratio_table, RatioCsvRow, RatioRow};
pub use strata::{derangements, strata_bipartite, strata_complete_graph, subprofile_count};

use crate::error::Result;
use crate::model::{MatchingProfile, MultipartiteShape, StratumTable};
use combinatorics::FactorialTable;

/// Dispatch options for the exact engine.
#[derive(Clone, Debug)]
pub struct ExactEngine {
    /// Skip every closed form and go through lattice enumeration and
    /// inclusion–exclusion.
    pub force_generic: bool,
    /// Largest number of sub-profiles inclusion–exclusion may visit.
    pub max_subprofiles: u128,
}

impl Default for ExactEngine {
    fn default() -> Self {
        Self { force_generic: false, max_subprofiles: 50_000_000 }
    }
}

impl ExactEngine {
    pub fn generic() -> Self {
        Self { force_generic: true, ..Self::default() }
    }

    /// Number of perfect matchings of the complete multipartite graph.
    pub fn pm_total(&self, shape: &MultipartiteShape) -> Result<BigUint> {
        shape.require_even()?;
        let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
        let fact = FactorialTable::new(lattice::factorial_bound(&sizes));
        Ok(self.pm_sizes(&sizes, &fact))
    }
}

pub fn pm_total(shape: &MultipartiteShape) -> Result<BigUint> {
    ExactEngine::default().pm_total(shape)
}

pub fn strata(shape: &MultipartiteShape, profile: &MatchingProfile) -> Result<StratumTable> {
    ExactEngine::default().strata(shape, profile)
}
