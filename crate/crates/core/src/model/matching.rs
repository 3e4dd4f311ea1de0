use serde::{Deserialize, Serialize};

use super::MultipartiteShape;
use crate::error::{Error, Result};

const UNMATCHED: usize = usize::MAX;

/// An explicit matching on the vertex set `0..n`, stored as a partner map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledMatching {
    mate: Vec<usize>,
}

impl LabeledMatching {
    pub fn empty(vertex_count: usize) -> Self {
        Self { mate: vec![UNMATCHED; vertex_count] }
    }

    pub fn from_pairs<I>(vertex_count: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::empty(vertex_count);
        for (u, v) in pairs {
            m.insert(u, v)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.mate.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, count: n });
            }
        }
        if u == v {
            return Err(Error::RepeatedVertex(u));
        }
        for x in [u, v] {
            if self.mate[x] != UNMATCHED {
                return Err(Error::RepeatedVertex(x));
            }
        }
        self.mate[u] = v;
        self.mate[v] = u;
        Ok(())
    }

    pub(crate) fn remove(&mut self, u: usize) {
        let v = self.mate[u];
        if v != UNMATCHED {
            self.mate[u] = UNMATCHED;
            self.mate[v] = UNMATCHED;
        }
    }

    /// Overwrites the partner entries of `u` and `v` without checks.
    pub(crate) fn set_pair(&mut self, u: usize, v: usize) {
        self.mate[u] = v;
        self.mate[v] = u;
    }

    pub fn vertex_count(&self) -> usize {
        self.mate.len()
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.mate.iter().filter(|&&m| m != UNMATCHED).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.mate.iter().all(|&m| m == UNMATCHED)
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(|&m| m != UNMATCHED)
    }

    pub fn is_covered(&self, x: usize) -> bool {
        self.mate.get(x).is_some_and(|&m| m != UNMATCHED)
    }

    /// The vertex matched to `x`.
    pub fn partner(&self, x: usize) -> Result<usize> {
        match self.mate.get(x) {
            None => Err(Error::VertexOutOfRange { vertex: x, count: self.mate.len() }),
            Some(&UNMATCHED) => Err(Error::NotMatched(x)),
            Some(&y) => Ok(y),
        }
    }

    /// Partner lookup for hot loops; the caller guarantees `x` is covered.
    #[inline]
    pub(crate) fn mate(&self, x: usize) -> usize {
        self.mate[x]
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        u < self.mate.len() && self.mate[u] == v
    }

    /// Pairs `(u, v)` with `u < v`, ordered by `u`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(u, &v)| v != UNMATCHED && u < v)
            .map(|(u, &v)| (u, v))
    }

    /// `|self ∩ other|`.
    pub fn overlap(&self, other: &LabeledMatching) -> Result<usize> {
        if self.mate.len() != other.mate.len() {
            return Err(Error::MismatchedVertexSets(self.mate.len(), other.mate.len()));
        }
        Ok(self.overlap_unchecked(other))
    }

    pub(crate) fn overlap_unchecked(&self, other: &LabeledMatching) -> usize {
        self.mate
            .iter()
            .zip(&other.mate)
            .enumerate()
            .filter(|&(u, (&a, &b))| a != UNMATCHED && a == b && u < a)
            .count()
    }

    /// Whether every pair of `self` is also a pair of `other`.
    pub fn is_subset_of(&self, other: &LabeledMatching) -> bool {
        self.mate.len() == other.mate.len() && self.pairs().all(|(u, v)| other.contains(u, v))
    }

    /// Checks that no pair lies inside one part of `shape`.
    pub fn check_on_shape(&self, shape: &MultipartiteShape) -> Result<()> {
        if self.mate.len() != shape.total() {
            return Err(Error::MismatchedVertexSets(self.mate.len(), shape.total()));
        }
        for (u, v) in self.pairs() {
            if shape.part_index(u) == shape.part_index(v) {
                return Err(Error::SamePartEdge(u, v));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatchingRepr {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for LabeledMatching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatchingRepr { n: self.vertex_count(), pairs: self.pairs().map(|(u, v)| [u, v]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledMatching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatchingRepr::deserialize(d)?;
        LabeledMatching::from_pairs(repr.n, repr.pairs.into_iter().map(|[u, v]| (u, v)))
            .map_err(serde::de::Error::custom)
    }
}
