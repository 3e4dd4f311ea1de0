use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson's test of observed `counts` against cell probabilities `probs`.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if counts.len() != probs.len() {
        return Err(Error::InvalidParameter("counts and probabilities differ in length".into()));
    }
    if counts.len() < 2 {
        return Err(Error::InvalidParameter("chi-square needs at least two cells".into()));
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::EmptyInput("no observations"));
    }
    let statistic = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * n as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquare { statistic, dof, p_value: dist.sf(statistic) })
}

pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare> {
    let p = 1.0 / counts.len() as f64;
    chi_square(counts, &vec![p; counts.len()])
}
