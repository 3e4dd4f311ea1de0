use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Strata;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactFromStrata,
    Empirical,
    Synthetic,
}

/// Masses over `ℓ = 0, 1, 2, …`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteDistribution<T: Scalar> {
    pub masses: Vec<T>,
    pub provenance: Provenance,
    /// The exact masses when the distribution came from strata.
    #[serde(skip)]
    pub exact: Option<Vec<BigRational>>,
}

impl<T: Scalar> DiscreteDistribution<T> {
    /// `Pr(X = ℓ) = |N_ℓ| / Σ_k |N_k|`.
    pub fn from_strata(strata: &Strata) -> Result<Self> {
        let exact = strata.probabilities().ok_or(Error::EmptyInput("stratum table has zero total"))?;
        Ok(Self { masses: exact.iter().map(T::from_ratio).collect(), provenance: Provenance::ExactFromStrata, exact: Some(exact) })
    }

    pub fn from_samples(samples: &[usize]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput("no samples"));
        }
        let len = samples.iter().copied().max().unwrap_or(0) + 1;
        let mut counts = vec![0u64; len];
        for &s in samples {
            counts[s] += 1;
        }
        let n = T::from_usize(samples.len()).expect("finite");
        let masses = counts.iter().map(|&c| T::from_u64(c).expect("finite") / n).collect();
        Ok(Self { masses, provenance: Provenance::Empirical, exact: None })
    }

    pub fn from_masses(masses: Vec<T>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyInput("no masses"));
        }
        if masses.iter().any(|m| m.is_nan() || *m < T::zero()) {
            return Err(Error::InvalidParameter("masses must be nonnegative".into()));
        }
        Ok(Self { masses, provenance: Provenance::Synthetic, exact: None })
    }

    pub fn mean(&self) -> T {
        self.masses.iter().enumerate().fold(T::zero(), |acc, (l, &m)| acc + T::from_usize(l).expect("finite") * m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TvReport<T: Scalar> {
    pub tv: T,
    /// Certified absolute error of `tv`: truncated Poisson tail plus a
    /// first-order rounding bound.
    pub error_bound: T,
    /// Number of masses on the distribution side.
    pub support: usize,
    /// `Pr(Po(λ) ≥ support)`, summed explicitly.
    pub poisson_tail: T,
}

fn check_lambda(lambda: &BigRational) -> Result<()> {
    if !lambda.is_positive() {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// `e^{−λ} λ^k / k!` for `k < count`, by the recurrence `q_k = q_{k−1} λ/k`.
pub fn poisson_masses<T: Scalar>(lambda: T, count: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(count);
    let mut q = (-lambda).exp();
    for k in 0..count {
        if k > 0 {
            q = q * lambda / T::from_usize(k).expect("finite");
        }
        out.push(q);
    }
    out
}

pub fn poisson_pmf<T: Scalar>(lambda: &BigRational, k: usize) -> Result<T> {
    check_lambda(lambda)?;
    Ok(poisson_masses(T::from_ratio(lambda), k + 1)[k])
}

/// Sums `Σ_{j ≥ from} q_j` starting from `q_from`. Terms are added until
/// `j ≥ 2λ` (so later ratios are at most 1/2) and the next term is
/// negligible; the rest is bounded by twice that term. Returns the sum,
/// the remainder bound and the number of terms added.
fn poisson_tail<T: Scalar>(lambda: T, from: usize, q_from: T) -> (T, T, usize) {
    let two = T::one() + T::one();
    let cutoff = T::unit_roundoff() * T::from_f64_lossy(1e-3);
    let (mut sum, mut term, mut j, mut terms) = (T::zero(), q_from, from, 0);
    loop {
        sum = sum + term;
        terms += 1;
        j += 1;
        term = term * lambda / T::from_usize(j).expect("finite");
        if T::from_usize(j).expect("finite") >= two * lambda && (two * term <= cutoff || term.is_zero()) {
            return (sum, two * term, terms);
        }
    }
}

/// `d_TV(D, Po(λ)) = ½ Σ_ℓ |D(ℓ) − Po(λ)(ℓ)|`, with the Poisson mass beyond
/// the support of `D` summed explicitly.
pub fn tv_to_poisson<T: Scalar>(dist: &DiscreteDistribution<T>, lambda: &BigRational) -> Result<TvReport<T>> {
    check_lambda(lambda)?;
    if dist.masses.is_empty() {
        return Err(Error::EmptyInput("empty distribution"));
    }
    let lam = T::from_ratio(lambda);
    let support = dist.masses.len();
    let q = poisson_masses(lam, support + 1);
    let u = T::unit_roundoff();
    let four = T::from_f64_lossy(4.0);

    let mut body = T::zero();
    let mut rounding = T::zero();
    for (l, (&p, &ql)) in dist.masses.iter().zip(&q).enumerate() {
        body = body + (p - ql).abs();
        // each Poisson mass carries about (l + 2) roundings, each |·| and sum one more
        rounding = rounding + (T::from_usize(l + 4).expect("finite")) * (p + ql);
    }
    let (tail, remainder, terms) = poisson_tail(lam, support, q[support]);
    let tail_rounding = T::from_usize(support + terms + 4).expect("finite") * tail;
    let two = T::one() + T::one();
    let tv = (body + tail) / two;
    let error_bound = remainder + four * u * (rounding + tail_rounding + T::from_usize(support + terms).expect("finite"));
    Ok(TvReport { tv, error_bound, support, poisson_tail: tail })
}

/// Exact-distribution TV distance from a stratum table.
pub fn tv_exact<T: Scalar>(strata: &Strata, lambda: &BigRational) -> Result<TvReport<T>> {
    if strata.is_empty() || strata.total().is_zero() {
        return Err(Error::EmptyInput("stratum table is empty"));
    }
    tv_to_poisson(&DiscreteDistribution::<T>::from_strata(strata)?, lambda)
}

/// TV distance between the empirical law of `samples` and `Po(λ)`.
pub fn tv_empirical<T: Scalar>(samples: &[usize], lambda: &BigRational) -> Result<TvReport<T>> {
    tv_to_poisson(&DiscreteDistribution::<T>::from_samples(samples)?, lambda)
}
