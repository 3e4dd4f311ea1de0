use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Strata;
use crate::scalar::Scalar;

/// One row of `|N_k| / |N_{k−1}|` against the switching prediction
/// `r / ((2r − 2) k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub k: usize,
    /// `None` when `|N_{k−1}| = 0`.
    pub actual: Option<BigRational>,
    pub predicted: BigRational,
    /// `|actual / predicted − 1|`, reduced.
    pub deviation: Option<BigRational>,
}

impl RatioRow {
    pub fn is_undefined(&self) -> bool {
        self.actual.is_none()
    }

    pub fn deviation_as<T: Scalar>(&self) -> Option<T> {
        self.deviation.as_ref().map(T::from_ratio)
    }
}

/// Predicted ratio `r / ((2r − 2) k)`.
pub fn predicted_ratio(r: usize, k: usize) -> BigRational {
    BigRational::new(BigInt::from(r), BigInt::from((2 * r - 2) * k))
}

pub fn ratio_table(strata: &Strata, r: usize) -> Result<Vec<RatioRow>> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("ratio prediction needs r ≥ 2, got {r}")));
    }
    if strata.len() < 2 {
        return Err(Error::InvalidParameter("ratio table needs at least two strata".into()));
    }
    let s = strata.as_slice();
    Ok((1..s.len())
        .map(|k| {
            let predicted = predicted_ratio(r, k);
            if s[k - 1].is_zero() {
                return RatioRow { k, actual: None, predicted, deviation: None };
            }
            let actual = BigRational::new(BigInt::from(s[k].clone()), BigInt::from(s[k - 1].clone()));
            let deviation = (&actual / &predicted - BigRational::from_integer(1.into())).abs();
            RatioRow { k, actual: Some(actual), predicted, deviation: Some(deviation) }
        })
        .collect())
}

#[derive(Serialize)]
pub struct RatioCsvRow {
    pub k: usize,
    pub actual_num: String,
    pub actual_den: String,
    pub predicted_num: String,
    pub predicted_den: String,
    pub deviation: String,
}

impl From<&RatioRow> for RatioCsvRow {
    fn from(row: &RatioRow) -> Self {
        let (an, ad) = match &row.actual {
            Some(a) => (a.numer().to_string(), a.denom().to_string()),
            None => ("undefined".into(), "undefined".into()),
        };
        RatioCsvRow {
            k: row.k,
            actual_num: an,
            actual_den: ad,
            predicted_num: row.predicted.numer().to_string(),
            predicted_den: row.predicted.denom().to_string(),
            deviation: row.deviation_as::<f64>().map(|d| format!("{d:.6}")).unwrap_or_else(|| "undefined".into()),
        }
    }
}
