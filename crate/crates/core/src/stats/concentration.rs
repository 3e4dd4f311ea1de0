use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which census a batch of samples holds, with the parameters fixing its
/// predicted center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CensusKind {
    /// Inter-part edge counts; center `n/(r−1)` with `n` the part size.
    Block { part_size: u64, r: usize },
    /// Same-part partner chains; center `2n/(r(r−1))` with `2n` the vertex
    /// count.
    Partner { n: u64, r: usize },
}

impl CensusKind {
    pub fn center<T: Scalar>(&self) -> T {
        let f = |x: u64| T::from_u64(x).expect("finite");
        match *self {
            CensusKind::Block { part_size, r } => f(part_size) / f(r as u64 - 1),
            CensusKind::Partner { n, r } => f(2 * n) / f((r * (r - 1)) as u64),
        }
    }

    /// `sqrt(n ln n)` for the census's `n`.
    pub fn scale<T: Scalar>(&self) -> T {
        let n = match *self {
            CensusKind::Block { part_size, .. } => part_size,
            CensusKind::Partner { n, .. } => n,
        };
        let n = T::from_u64(n).expect("finite");
        (n * n.ln()).sqrt()
    }

    fn r(&self) -> usize {
        match *self {
            CensusKind::Block { r, .. } | CensusKind::Partner { r, .. } => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport<T: Scalar> {
    pub census: CensusKind,
    pub samples: usize,
    pub center: T,
    /// `sqrt(n ln n)`.
    pub scale: T,
    pub constant: T,
    pub max_abs_deviation: T,
    /// `max_abs_deviation / scale`.
    pub max_normalized: T,
    /// Fraction of samples whose every entry lies within `constant · scale`.
    pub within_fraction: T,
    pub all_within: bool,
}

/// Largest deviation of any census entry from the predicted center,
/// normalized by `sqrt(n ln n)` and judged against `constant`.
pub fn concentration_summary<T: Scalar>(census: CensusKind, rows: &[Vec<u64>], constant: T) -> Result<ConcentrationReport<T>> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("no census samples"));
    }
    if census.r() < 2 {
        return Err(Error::InvalidParameter("census needs at least two parts".into()));
    }
    let center: T = census.center();
    let scale: T = census.scale();
    let threshold = constant * scale;
    let mut max_dev = T::zero();
    let mut within = 0usize;
    for row in rows {
        let dev = row
            .iter()
            .map(|&x| (T::from_u64(x).expect("finite") - center).abs())
            .fold(T::zero(), T::max);
        max_dev = max_dev.max(dev);
        within += usize::from(dev <= threshold);
    }
    let max_normalized = if max_dev.is_zero() { T::zero() } else { max_dev / scale };
    Ok(ConcentrationReport {
        census,
        samples: rows.len(),
        center,
        scale,
        constant,
        max_abs_deviation: max_dev,
        max_normalized,
        within_fraction: T::from_usize(within).expect("finite") / T::from_usize(rows.len()).expect("finite"),
        all_within: within == rows.len(),
    })
}
