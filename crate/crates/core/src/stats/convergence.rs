use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::tv::tv_exact;
use crate::error::{Error, Result};
use crate::exact::ExactEngine;
use crate::model::{MatchingProfile, MultipartiteShape};
use crate::scalar::Scalar;

/// `λ = r / (2r − 2)`, the limiting mean overlap with a perfect matching.
pub fn limit_lambda(r: usize) -> Result<BigRational> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("need at least two parts, got r = {r}")));
    }
    Ok(BigRational::new(BigInt::from(r), BigInt::from(2 * r - 2)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow<T: Scalar> {
    pub shape: String,
    pub r: usize,
    /// Common part size when all parts are equal.
    pub part_size: Option<usize>,
    /// `λ` as `"p/q"`.
    pub lambda: Option<String>,
    pub p0_exact: Option<T>,
    /// `e^{−λ}`.
    pub p0_limit: Option<T>,
    pub tv: Option<T>,
    pub tv_error_bound: Option<T>,
    pub tractable: bool,
    /// Why a row was skipped.
    pub note: Option<String>,
    /// Wall time, only when requested (it breaks byte determinism).
    pub runtime_ms: Option<u64>,
}

fn row<T: Scalar>(shape: &MultipartiteShape, engine: &ExactEngine) -> Result<(BigRational, T, T, T)> {
    let lambda = limit_lambda(shape.r())?;
    let profile = MatchingProfile::canonical_perfect(shape)?;
    let table = engine.strata(shape, &profile)?;
    let p0 = table.strata.p0().ok_or(Error::NoPerfectMatching)?;
    let tv = tv_exact::<T>(&table.strata, &lambda)?;
    Ok((lambda, T::from_ratio(&p0), tv.tv, tv.error_bound))
}

/// One row per shape: exact `Pr(X = 0)` against `e^{−λ}` and the exact TV
/// distance to `Po(λ)`, with `M` the canonical perfect matching. Shapes the
/// engine cannot handle give a flagged row instead of an error.
pub fn convergence_table<T: Scalar>(shapes: &[MultipartiteShape], engine: &ExactEngine, timing: bool) -> Vec<ConvergenceRow<T>> {
    shapes
        .iter()
        .map(|shape| {
            let start = Instant::now();
            let result = row::<T>(shape, engine);
            let runtime_ms = timing.then(|| start.elapsed().as_millis() as u64);
            let mut out = ConvergenceRow {
                shape: shape.to_string(),
                r: shape.r(),
                part_size: shape.is_uniform().then(|| shape.size(0)),
                lambda: None,
                p0_exact: None,
                p0_limit: None,
                tv: None,
                tv_error_bound: None,
                tractable: false,
                note: None,
                runtime_ms,
            };
            match result {
                Ok((lambda, p0, tv, err)) => {
                    out.p0_limit = Some((-T::from_ratio(&lambda)).exp());
                    out.lambda = Some(lambda.to_string());
                    out.p0_exact = Some(p0);
                    out.tv = Some(tv);
                    out.tv_error_bound = Some(err);
                    out.tractable = true;
                }
                Err(e) => out.note = Some(e.to_string()),
            }
            out
        })
        .collect()
}
