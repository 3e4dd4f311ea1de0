//! Partition of the lattice points into cubes `B_u` of side `2d` around the
//! balanced point `c`, with the finite-scale checks `|P_u| ≤ |C|` and the
//! far-cell weight ratios.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::lattice::LatticeWalk;
use crate::error::{Error, Result};
use crate::model::MultipartiteShape;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCellConfig {
    pub n_scale: u64,
    /// `⌊n_scale / (r − 1)⌋`
    pub c: i64,
    /// `⌊sqrt(n_scale · ln n_scale)⌋`
    pub d: i64,
    /// Cells with `|u|_1` at least this are "far".
    pub far_threshold: u64,
    /// When false the `c ≥ 3d` check is reported but not enforced.
    pub enforce_regime: bool,
}

impl LatticeCellConfig {
    pub fn new(n_scale: u64, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter("cell census needs r ≥ 2".into()));
        }
        if n_scale < 2 {
            return Err(Error::InvalidParameter("n_scale must be at least 2".into()));
        }
        let n = n_scale as f64;
        let d = (n * n.ln()).sqrt().floor() as i64;
        Ok(Self {
            n_scale,
            c: (n_scale / (r as u64 - 1)) as i64,
            d: d.max(1),
            far_threshold: 4,
            enforce_regime: true,
        })
    }

    pub fn regime_satisfied(&self) -> bool {
        self.c >= 3 * self.d
    }

    /// Index `u` of the cube `(c + 2ud − d, c + 2ud + d]` containing `x`.
    pub fn cell_coordinate(&self, x: i64) -> i64 {
        (x - self.c + self.d - 1).div_euclid(2 * self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCount {
    pub u: Vec<i64>,
    pub points: u64,
    #[serde(skip)]
    pub relative_weight: BigUint,
}

impl CellCount {
    pub fn l1(&self) -> u64 {
        self.u.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn linf(&self) -> u64 {
        self.u.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub config: LatticeCellConfig,
    pub regime_satisfied: bool,
    pub lattice_points: u64,
    /// `|C|`: points in cells with `|u|_∞ ≤ 1`.
    pub central_points: u64,
    pub cells: Vec<CellCount>,
    /// `|P_u| ≤ |C|` for every cell.
    pub all_cells_bounded: bool,
    pub max_cell_points: u64,
    /// Largest `φ(P_u)/φ(C)` over cells with `|u|_1 ≥ far_threshold`.
    #[serde(serialize_with = "crate::render::opt_ratio")]
    pub max_far_ratio: Option<BigRational>,
}

/// Runs the census. Weights are compared through `Π_{i<j} m!/v_{i,j}!`
/// with `m` the largest part, which is proportional to `φ(v)` for a fixed
/// shape and integral.
pub fn lattice_cell_census(shape: &MultipartiteShape, cfg: &LatticeCellConfig) -> Result<CensusReport> {
    shape.require_even()?;
    let regime_satisfied = cfg.regime_satisfied();
    if cfg.enforce_regime && !regime_satisfied {
        return Err(Error::Regime { c: cfg.c, three_d: 3 * cfg.d });
    }
    let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
    let m = sizes.iter().copied().max().unwrap_or(0) as usize;
    // falling[v] = m! / v!
    let mut falling = vec![BigUint::one(); m + 1];
    for v in (0..m).rev() {
        falling[v] = &falling[v + 1] * BigUint::from(v + 1);
    }

    let mut cells: BTreeMap<Vec<i64>, (u64, BigUint)> = BTreeMap::new();
    let mut points = 0u64;
    LatticeWalk::new(&sizes).for_each(|v| {
        points += 1;
        let u: Vec<i64> = v.iter().map(|&x| cfg.cell_coordinate(x as i64)).collect();
        let w = v.iter().fold(BigUint::one(), |acc, &x| acc * &falling[x as usize]);
        let e = cells.entry(u).or_insert_with(|| (0, BigUint::zero()));
        e.0 += 1;
        e.1 += w;
    });

    let cells: Vec<CellCount> = cells
        .into_iter()
        .map(|(u, (points, relative_weight))| CellCount { u, points, relative_weight })
        .collect();
    let central: Vec<&CellCount> = cells.iter().filter(|c| c.linf() <= 1).collect();
    let central_points: u64 = central.iter().map(|c| c.points).sum();
    let central_weight: BigUint = central.iter().map(|c| &c.relative_weight).sum();
    let all_cells_bounded = cells.iter().all(|c| c.points <= central_points);
    let max_cell_points = cells.iter().map(|c| c.points).max().unwrap_or(0);
    let max_far_ratio = if central_weight.is_zero() {
        None
    } else {
        cells
            .iter()
            .filter(|c| c.l1() >= cfg.far_threshold)
            .map(|c| {
                BigRational::new(BigInt::from(c.relative_weight.clone()), BigInt::from(central_weight.clone()))
            })
            .max()
    };
    Ok(CensusReport {
        config: cfg.clone(),
        regime_satisfied,
        lattice_points: points,
        central_points,
        cells,
        all_cells_bounded,
        max_cell_points,
        max_far_ratio,
    })
}
