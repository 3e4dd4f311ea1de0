//! Post-processing of exact and sampled distributions.
//!
//! Everything here is generic over [`Scalar`](crate::Scalar). Exact inputs (strata,
//! rational `λ`) are rounded once on entry; the exponential is the only other
//! inexact step.

mod bound;
mod concentration;
mod convergence;
mod goodness;
mod tv;

pub use bound::{factorial_ratio_bound_check, random_bound_instance, BoundCheck, BoundInstance};
pub use concentration::{concentration_summary, CensusKind, ConcentrationReport};
pub use convergence::{convergence_table, limit_lambda, ConvergenceRow};
pub use goodness::{chi_square, chi_square_uniform, ChiSquare};
pub use tv::{
    poisson_masses, poisson_pmf, tv_empirical, tv_exact, tv_to_poisson, DiscreteDistribution, Provenance,
    TvReport,
};

