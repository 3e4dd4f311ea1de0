use serde::{Deserialize, Serialize};

use super::Host;
use crate::error::{Error, Result};

/// Part sizes `v_1..v_r` of a complete multipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct MultipartiteShape {
    parts: Vec<usize>,
    offsets: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub part: usize,
    pub slot: usize,
}

impl MultipartiteShape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidShape("a shape needs at least one part".into()));
        }
        if let Some(i) = parts.iter().position(|&p| p == 0) {
            return Err(Error::InvalidShape(format!("part {i} has size 0")));
        }
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut acc = 0;
        for &p in &parts {
            offsets.push(acc);
            acc += p;
        }
        offsets.push(acc);
        Ok(Self { parts, offsets })
    }

    /// `r` parts of `size` vertices each.
    pub fn uniform(r: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; r])
    }

    /// The complete graph `K_{2n}` seen as `2n` parts of size one.
    pub fn complete_graph(n_pairs: usize) -> Result<Self> {
        Self::uniform(2 * n_pairs, 1)
    }

    /// Parses comma-separated part sizes, e.g. `"2,2,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidShape(format!("cannot parse part size {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self, part: usize) -> usize {
        self.parts[part]
    }

    pub fn total(&self) -> usize {
        self.offsets[self.parts.len()]
    }

    pub fn require_even(&self) -> Result<()> {
        if self.total() % 2 == 1 {
            Err(Error::OddVertexCount(self.total()))
        } else {
            Ok(())
        }
    }

    /// First flat index of `part`.
    pub fn offset(&self, part: usize) -> usize {
        self.offsets[part]
    }

    /// Flat indices of the vertices in `part`.
    pub fn part_range(&self, part: usize) -> std::ops::Range<usize> {
        self.offsets[part]..self.offsets[part + 1]
    }

    pub fn flat(&self, v: VertexId) -> Result<usize> {
        if v.part >= self.r() || v.slot >= self.parts[v.part] {
            return Err(Error::VertexOutOfRange {
                vertex: self.offsets.get(v.part).copied().unwrap_or(self.total()) + v.slot,
                count: self.total(),
            });
        }
        Ok(self.offsets[v.part] + v.slot)
    }

    pub fn vertex(&self, flat: usize) -> Result<VertexId> {
        if flat >= self.total() {
            return Err(Error::VertexOutOfRange { vertex: flat, count: self.total() });
        }
        let part = self.offsets.partition_point(|&o| o <= flat) - 1;
        Ok(VertexId { part, slot: flat - self.offsets[part] })
    }

    /// Part containing flat vertex `v`; panics when out of range.
    pub fn part_index(&self, v: usize) -> usize {
        debug_assert!(v < self.total());
        self.offsets.partition_point(|&o| o <= v) - 1
    }

    /// Whether all parts have the same size.
    pub fn is_uniform(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] == w[1])
    }
}

impl TryFrom<Vec<usize>> for MultipartiteShape {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<MultipartiteShape> for Vec<usize> {
    fn from(s: MultipartiteShape) -> Self {
        s.parts
    }
}

impl std::fmt::Display for MultipartiteShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Host for MultipartiteShape {
    fn vertex_count(&self) -> usize {
        self.total()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.part_index(u) != self.part_index(v)
    }

    fn part_of(&self, v: usize) -> Option<usize> {
        Some(self.part_index(v))
    }

    fn describe(&self) -> String {
        format!("complete multipartite {self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_zero_parts() {
        assert!(MultipartiteShape::new(vec![]).is_err());
        assert!(MultipartiteShape::new(vec![2, 0]).is_err());
    }

    #[test]
    fn part_major_labeling() {
        let s = MultipartiteShape::new(vec![2, 1, 3]).unwrap();
        assert_eq!(s.total(), 6);
        assert_eq!(s.vertex(0).unwrap(), VertexId { part: 0, slot: 0 });
        assert_eq!(s.vertex(2).unwrap(), VertexId { part: 1, slot: 0 });
        assert_eq!(s.vertex(5).unwrap(), VertexId { part: 2, slot: 2 });
        for v in 0..6 {
            assert_eq!(s.flat(s.vertex(v).unwrap()).unwrap(), v);
        }
        assert!(s.vertex(6).is_err());
        assert!(s.flat(VertexId { part: 1, slot: 1 }).is_err());
    }

    #[test]
    fn adjacency_is_across_parts() {
        let s = MultipartiteShape::parse("2,2").unwrap();
        assert!(!s.adjacent(0, 1));
        assert!(s.adjacent(0, 2));
        assert!(!s.adjacent(3, 3));
    }

    #[test]
    fn json_is_a_plain_array() {
        let s = MultipartiteShape::parse("3, 1,2").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[3,1,2]");
        let back: MultipartiteShape = serde_json::from_str("[3,1,2]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<MultipartiteShape>("[0]").is_err());
    }

    #[test]
    fn odd_total_is_flagged() {
        let s = MultipartiteShape::parse("3,3,3").unwrap();
        assert_eq!(s.require_even(), Err(Error::OddVertexCount(9)));
    }
}
