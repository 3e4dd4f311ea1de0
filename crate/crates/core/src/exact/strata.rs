//! Stratum sizes `|N_ℓ|` by inclusion–exclusion over sub-profiles, plus the
//! bipartite and complete-graph closed forms.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::combinatorics::{binomial_row, derangement_table, double_factorial_odd, FactorialTable};
use super::lattice::{factorial_bound, pm_fast, pm_generic};
use super::ExactEngine;
use crate::error::{Error, Result};
use crate::model::{MatchingProfile, MultipartiteShape, Strata, StratumTable};

/// `Π (m_{i,j} + 1)`: the number of sub-profiles `s ≤ m`.
pub fn subprofile_count(profile: &MatchingProfile) -> u128 {
    profile.entries().fold(1u128, |acc, (_, _, m)| acc.saturating_mul(m as u128 + 1))
}

impl ExactEngine {
    pub(crate) fn pm_sizes(&self, sizes: &[u64], fact: &FactorialTable) -> BigUint {
        if self.force_generic {
            pm_generic(sizes, fact)
        } else {
            pm_fast(sizes, fact)
        }
    }

    /// Inclusion–exclusion grouped by sub-profile `s ≤ m`.
    ///
    /// Forcing a set of `M`-edges of type `s` leaves a complete multipartite
    /// graph with `v_i − Σ_j s_{i,j}` vertices in part `i`, and there are
    /// `Π C(m_{i,j}, s_{i,j})` such sets. Summing over `|s| = k` gives
    /// `F_k = Σ_ℓ C(ℓ, k)|N_ℓ|`, which is inverted as
    /// `|N_ℓ| = Σ_{k≥ℓ} (−1)^{k−ℓ} C(k, ℓ) F_k`.
    pub(crate) fn strata_inclusion_exclusion(
        &self,
        shape: &MultipartiteShape,
        profile: &MatchingProfile,
    ) -> Result<Strata> {
        let count = subprofile_count(profile);
        if count > self.max_subprofiles {
            return Err(Error::Intractable(format!(
                "{count} sub-profiles exceed the budget of {}",
                self.max_subprofiles
            )));
        }
        let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
        let entries: Vec<(usize, usize, u64)> = profile.entries().collect();
        let total_m = profile.total() as usize;
        let fact = FactorialTable::new(factorial_bound(&sizes));
        let rows: Vec<Vec<BigUint>> = entries.iter().map(|&(_, _, m)| binomial_row(m as usize)).collect();

        let forced = if entries.is_empty() {
            let mut f = vec![BigUint::zero(); 1];
            f[0] = self.pm_sizes(&sizes, &fact);
            f
        } else {
            let first_max = entries[0].2;
            (0..=first_max)
                .into_par_iter()
                .map(|s0| self.forced_sums_with_first(s0, &sizes, &entries, &rows, &fact, total_m))
                .reduce(
                    || vec![BigUint::zero(); total_m + 1],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                )
        };

        let mut strata = Vec::with_capacity(total_m + 1);
        for l in 0..=total_m {
            let choose = binomial_row_from(l, total_m);
            let mut acc = BigInt::zero();
            for (k, f) in forced.iter().enumerate().skip(l) {
                let term = BigInt::from_biguint(Sign::Plus, &choose[k - l] * f);
                if (k - l) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let n = acc.to_biguint().expect("stratum sizes are nonnegative");
            strata.push(n);
        }
        Ok(Strata(strata))
    }

    fn forced_sums_with_first(
        &self,
        s0: u64,
        sizes: &[u64],
        entries: &[(usize, usize, u64)],
        rows: &[Vec<BigUint>],
        fact: &FactorialTable,
        total_m: usize,
    ) -> Vec<BigUint> {
        let mut forced = vec![BigUint::zero(); total_m + 1];
        let mut memo: HashMap<Vec<u64>, BigUint> = HashMap::new();
        let mut s = vec![0u64; entries.len()];
        s[0] = s0;
        loop {
            let mut reduced = sizes.to_vec();
            let mut k = 0usize;
            let mut coeff = BigUint::one();
            for (e, &(i, j, _)) in entries.iter().enumerate() {
                reduced[i] -= s[e];
                reduced[j] -= s[e];
                k += s[e] as usize;
                if s[e] > 0 {
                    coeff *= &rows[e][s[e] as usize];
                }
            }
            reduced.sort_unstable();
            let pm = memo.entry(reduced).or_insert_with_key(|key| self.pm_sizes(key, fact));
            if !pm.is_zero() {
                forced[k] += coeff * &*pm;
            }
            // odometer over entries 1..
            let mut e = entries.len();
            loop {
                e -= 1;
                if e == 0 {
                    return forced;
                }
                if s[e] < entries[e].2 {
                    s[e] += 1;
                    break;
                }
                s[e] = 0;
            }
        }
    }

    /// Exact strata for a `(shape, profile)` instance, dispatching to the
    /// closed forms for `(n, n)` and `K_{2n}` with a perfect profile unless
    /// `force_generic` is set.
    pub fn strata(&self, shape: &MultipartiteShape, profile: &MatchingProfile) -> Result<StratumTable> {
        shape.require_even()?;
        profile.check_realizable(shape)?;
        if !self.force_generic && profile.is_perfect_for(shape) {
            if shape.r() == 2 {
                return strata_bipartite(shape.size(0));
            }
            if shape.parts().iter().all(|&p| p == 1) {
                let mut t = strata_complete_graph(shape.total() / 2)?;
                t.profile = profile.clone();
                return Ok(t);
            }
        }
        let strata = self.strata_inclusion_exclusion(shape, profile)?;
        Ok(StratumTable { shape: shape.clone(), profile: profile.clone(), strata })
    }
}

// C(l, l), C(l+1, l), …, C(top, l)
fn binomial_row_from(l: usize, top: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(top - l + 1);
    let mut c = BigUint::one();
    out.push(c.clone());
    for k in l + 1..=top {
        c = c * BigUint::from(k) / BigUint::from(k - l);
        out.push(c.clone());
    }
    out
}

/// `d_n`, the number of derangements of `n` letters.
pub fn derangements(n: i64) -> Result<BigUint> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("derangements of negative n = {n}")));
    }
    Ok(derangement_table(n as usize).pop().expect("table has n + 1 entries"))
}

/// Strata of `K_{n,n}` against a perfect matching: `|N_ℓ| = C(n, ℓ)·d_{n−ℓ}`.
pub fn strata_bipartite(n: usize) -> Result<StratumTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("strata_bipartite needs n ≥ 1".into()));
    }
    let d = derangement_table(n);
    let c = binomial_row(n);
    let strata = (0..=n).map(|l| &c[l] * &d[n - l]).collect();
    Ok(StratumTable {
        shape: MultipartiteShape::new(vec![n, n])?,
        profile: MatchingProfile::new([(0, 1, n as u64)])?,
        strata: Strata(strata),
    })
}

/// Strata of `K_{2n}` against a perfect matching of `n` pairs:
/// `|N_ℓ| = C(n, ℓ) Σ_j (−1)^j C(n−ℓ, j) (2(n−ℓ−j) − 1)!!`.
pub fn strata_complete_graph(n_pairs: usize) -> Result<StratumTable> {
    if n_pairs == 0 {
        return Err(Error::InvalidParameter("strata_complete_graph needs n_pairs ≥ 1".into()));
    }
    let n = n_pairs;
    let dfact: Vec<BigUint> = (0..=n).map(double_factorial_odd).collect();
    let c = binomial_row(n);
    let mut strata = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let rest = n - l;
        let row = binomial_row(rest);
        let mut acc = BigInt::zero();
        for j in 0..=rest {
            let term = BigInt::from(&row[j] * &dfact[rest - j]);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let avoid = acc.to_biguint().expect("avoiding counts are nonnegative");
        strata.push(&c[l] * avoid);
    }
    let shape = MultipartiteShape::complete_graph(n)?;
    let profile = MatchingProfile::new((0..n).map(|i| (2 * i, 2 * i + 1, 1)))?;
    Ok(StratumTable { shape, profile, strata: Strata(strata) })
}
