use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EdgeCountVector, LabeledMatching, MultipartiteShape};

/// `|R ∩ M|`.
pub fn overlap_statistic(r: &LabeledMatching, m: &LabeledMatching) -> Result<usize> {
    r.overlap(m)
}

/// For each part `i`, the number of `x ∈ V_i` with `Q(M(x)) ∈ V_i`.
pub fn partner_part_census(q: &LabeledMatching, m: &LabeledMatching, shape: &MultipartiteShape) -> Result<Vec<u64>> {
    for x in [q, m] {
        if x.vertex_count() != shape.total() {
            return Err(Error::MismatchedVertexSets(x.vertex_count(), shape.total()));
        }
        if !x.is_perfect() {
            return Err(Error::NotPerfect);
        }
    }
    let mut counts = vec![0u64; shape.r()];
    for x in 0..shape.total() {
        let part = shape.part_index(x);
        if shape.part_index(q.mate(m.mate(x))) == part {
            counts[part] += 1;
        }
    }
    Ok(counts)
}

/// Inter-part edge counts of a perfect matching.
pub fn block_census(r: &LabeledMatching, shape: &MultipartiteShape) -> Result<EdgeCountVector> {
    EdgeCountVector::of(shape, r)
}

/// One row of a sample log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub sample_index: usize,
    pub overlap: usize,
    pub partner_census: Vec<u64>,
    pub block_census: Vec<u64>,
}

impl SampleRecord {
    pub fn new(index: usize, sample: &LabeledMatching, m: &LabeledMatching, shape: &MultipartiteShape) -> Result<Self> {
        Ok(Self {
            sample_index: index,
            overlap: overlap_statistic(sample, m)?,
            partner_census: partner_part_census(sample, m, shape)?,
            block_census: block_census(sample, shape)?.as_slice().to_vec(),
        })
    }
}
