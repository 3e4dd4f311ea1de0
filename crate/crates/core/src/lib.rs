//! Exact and randomized perfect-matching statistics for complete
//! multipartite graphs with a deleted matching.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: shapes, labeled matchings, type profiles, edge-count vectors
//!   and stratum tables, with their JSON encodings.
//! - [`exact`]: big-integer counting over the lattice points of the
//!   matching-type polytope, inclusion–exclusion strata, closed forms, ratio
//!   tables and the cube-partition census.
//! - [`oracle`]: brute-force enumeration on small graphs.
//! - [`switching`]: the three-edge rotation, good/reverse-good predicates and
//!   the degree audits of the auxiliary switching graph.
//! - [`sampler`]: exact two-stage uniform sampling, conditional sampling,
//!   a switch-move Markov chain and per-sample censuses.
//! - [`stats`]: Poisson masses, total variation distance, convergence
//!   tables, concentration summaries and the factorial-ratio bound checker.
//!
//! Floating-point post-processing is generic over [`Scalar`] (`f32`/`f64`);
//! counting is always exact.

pub mod error;
pub mod exact;
pub mod model;
pub mod oracle;
mod render;
pub mod sampler;
pub mod scalar;
pub mod stats;
pub mod switching;

pub use error::{Error, Result};
pub use model::{
    EdgeCountVector, GeneralGraph, Host, LabeledMatching, MatchingProfile, MultipartiteShape,
    StratumTable, Strata, VertexId,
};
pub use scalar::Scalar;

/// Exact nonnegative count (matchings, strata, weights).
pub type Count = num_bigint::BigUint;
/// Exact signed integer, used inside inclusion–exclusion.
pub type SignedCount = num_bigint::BigInt;
/// Exact probability or ratio.
pub type Exact = num_rational::BigRational;
/// Default floating-point scalar for rendered statistics.
pub type Real = f64;

pub type TvReport64 = stats::TvReport<f64>;
pub type TvReport32 = stats::TvReport<f32>;
pub type ConvergenceRow64 = stats::ConvergenceRow<f64>;
pub type DiscreteDistribution64 = stats::DiscreteDistribution<f64>;

/// Version string embedded in every emitted artifact.
pub const ENGINE_VERSION: &str = concat!("matchlab ", env!("CARGO_PKG_VERSION"));
