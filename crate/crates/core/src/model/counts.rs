use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LabeledMatching, MultipartiteShape};
use crate::error::{Error, Result};

/// Number of unordered part pairs, `C(r, 2)`.
pub fn pair_count(r: usize) -> usize {
    r * r.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j`, in lexicographic order.
pub fn pair_index(r: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < r);
    i * (2 * r - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j < r`, lexicographically.
pub fn pairs(r: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..r).flat_map(move |i| (i + 1..r).map(move |j| (i, j)))
}

/// Edge counts `m_{i,j}` of a deleted matching per unordered part pair.
///
/// Only nonzero entries are stored, so two profiles compare equal exactly
/// when they agree on every pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchingProfile {
    counts: BTreeMap<(usize, usize), u64>,
}

impl MatchingProfile {
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut counts = BTreeMap::new();
        for (i, j, m) in entries {
            if i == j {
                return Err(Error::SamePartEdge(i, j));
            }
            let key = (i.min(j), i.max(j));
            if m > 0 {
                *counts.entry(key).or_insert(0) += m;
            }
        }
        Ok(Self { counts })
    }

    /// Parses `i:j:m,...` (0-based part indices).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        let entries = s
            .split(',')
            .map(|t| {
                let f: Vec<&str> = t.trim().split(':').collect();
                let bad = || Error::InvalidParameter(format!("cannot parse profile entry {t:?}"));
                if f.len() != 3 {
                    return Err(bad());
                }
                let i = f[0].parse().map_err(|_| bad())?;
                let j = f[1].parse().map_err(|_| bad())?;
                let m = f[2].parse().map_err(|_| bad())?;
                Ok((i, j, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Type profile of an explicit matching on `shape`.
    pub fn of(shape: &MultipartiteShape, m: &LabeledMatching) -> Result<Self> {
        m.check_on_shape(shape)?;
        let mut counts = BTreeMap::new();
        for (u, v) in m.pairs() {
            let (a, b) = (shape.part_index(u), shape.part_index(v));
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        Ok(Self { counts })
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Nonzero entries `(i, j, m)` with `i < j`, lexicographically.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    /// Total number of edges.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Endpoints the profile places in part `i`.
    pub fn row_sum(&self, i: usize) -> u64 {
        self.entries().filter(|&(a, b, _)| a == i || b == i).map(|(_, _, m)| m).sum()
    }

    /// Dense entries over `pairs(r)`.
    pub fn dense(&self, r: usize) -> Vec<u64> {
        pairs(r).map(|(i, j)| self.get(i, j)).collect()
    }

    pub fn check_realizable(&self, shape: &MultipartiteShape) -> Result<()> {
        let r = shape.r();
        if let Some((i, j, _)) = self.entries().find(|&(_, j, _)| j >= r) {
            return Err(Error::ProfileOutOfRange(i, j));
        }
        for i in 0..r {
            let needed = self.row_sum(i);
            let available = shape.size(i) as u64;
            if needed > available {
                return Err(Error::UnrealizableProfile { part: i, needed, available });
            }
        }
        Ok(())
    }

    /// Whether the profile describes a perfect matching of `shape`.
    pub fn is_perfect_for(&self, shape: &MultipartiteShape) -> bool {
        self.check_realizable(shape).is_ok()
            && (0..shape.r()).all(|i| self.row_sum(i) == shape.size(i) as u64)
    }

    /// An explicit matching with this profile: for each pair type in
    /// lexicographic order, the lowest free slots of both parts are paired.
    pub fn realize(&self, shape: &MultipartiteShape) -> Result<LabeledMatching> {
        self.check_realizable(shape)?;
        let mut next: Vec<usize> = (0..shape.r()).map(|i| shape.offset(i)).collect();
        let mut m = LabeledMatching::empty(shape.total());
        for (i, j, count) in self.entries() {
            for _ in 0..count {
                m.insert(next[i], next[j])?;
                next[i] += 1;
                next[j] += 1;
            }
        }
        Ok(m)
    }

    /// The canonical perfect profile of `shape`: repeatedly pair a vertex of
    /// the part with the most unmatched vertices with one of the runner-up
    /// (ties go to the lower index). Succeeds whenever a perfect matching
    /// exists.
    pub fn canonical_perfect(shape: &MultipartiteShape) -> Result<Self> {
        shape.require_even()?;
        let mut rem: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
        let total: u64 = rem.iter().sum();
        let max = rem.iter().copied().max().unwrap_or(0);
        if 2 * max > total {
            return Err(Error::NoPerfectMatching);
        }
        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        loop {
            let mut order: Vec<usize> = (0..rem.len()).filter(|&i| rem[i] > 0).collect();
            if order.is_empty() {
                break;
            }
            order.sort_by(|&a, &b| rem[b].cmp(&rem[a]).then(a.cmp(&b)));
            let (a, b) = (order[0], order[1]);
            rem[a] -= 1;
            rem[b] -= 1;
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        Ok(Self { counts })
    }

    /// Every profile with `Σ_j m_{i,j} ≤ v_i`, in lexicographic order of the
    /// dense entry vector.
    pub fn enumerate_realizable(shape: &MultipartiteShape) -> Vec<Self> {
        let r = shape.r();
        let pair_list: Vec<(usize, usize)> = pairs(r).collect();
        let mut cap: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
        let mut cur = vec![0u64; pair_list.len()];
        let mut out = Vec::new();
        fn rec(
            idx: usize,
            pair_list: &[(usize, usize)],
            cap: &mut [u64],
            cur: &mut [u64],
            out: &mut Vec<MatchingProfile>,
        ) {
            if idx == pair_list.len() {
                let entries = pair_list.iter().zip(cur.iter()).map(|(&(i, j), &m)| (i, j, m));
                out.push(MatchingProfile::new(entries).expect("valid pairs"));
                return;
            }
            let (i, j) = pair_list[idx];
            for m in 0..=cap[i].min(cap[j]) {
                cur[idx] = m;
                cap[i] -= m;
                cap[j] -= m;
                rec(idx + 1, pair_list, cap, cur, out);
                cap[i] += m;
                cap[j] += m;
            }
            cur[idx] = 0;
        }
        rec(0, &pair_list, &mut cap, &mut cur, &mut out);
        out
    }
}

impl Serialize for MatchingProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize, u64)> = self.entries().collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatchingProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<(usize, usize, u64)>::deserialize(d)?;
        if v.iter().any(|&(i, j, _)| i >= j) {
            return Err(serde::de::Error::custom("profile entries need i < j"));
        }
        MatchingProfile::new(v).map_err(serde::de::Error::custom)
    }
}

/// Inter-part edge counts `v_{i,j}` of a perfect matching; one lattice point
/// of the matching-type polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeCountVector {
    r: usize,
    entries: Vec<u64>,
}

impl EdgeCountVector {
    /// `entries` are dense over `pairs(r)`.
    pub fn new(r: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != pair_count(r) {
            return Err(Error::InvalidParameter(format!(
                "{} entries given, {} pairs for r = {r}",
                entries.len(),
                pair_count(r)
            )));
        }
        Ok(Self { r, entries })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        if i == j {
            return 0;
        }
        self.entries[pair_index(self.r, i.min(j), i.max(j))]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.entries
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        pairs(self.r).zip(&self.entries).map(|((i, j), &v)| (i, j, v))
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        (0..self.r).filter(|&j| j != i).map(|j| self.get(i, j)).sum()
    }

    /// Checks the row-sum system `Σ_{j≠i} v_{i,j} = v_i`.
    pub fn check_pm(&self, shape: &MultipartiteShape) -> Result<()> {
        if self.r != shape.r() {
            return Err(Error::InvalidParameter(format!(
                "vector has r = {}, shape has r = {}",
                self.r,
                shape.r()
            )));
        }
        for i in 0..self.r {
            let actual = self.row_sum(i);
            let expected = shape.size(i) as u64;
            if actual != expected {
                return Err(Error::RowConstraint { part: i, expected, actual });
            }
        }
        Ok(())
    }

    /// Inter-part edge counts of an explicit perfect matching.
    pub fn of(shape: &MultipartiteShape, m: &LabeledMatching) -> Result<Self> {
        if !m.is_perfect() {
            return Err(Error::NotPerfect);
        }
        m.check_on_shape(shape)?;
        let r = shape.r();
        let mut entries = vec![0u64; pair_count(r)];
        for (u, v) in m.pairs() {
            let (a, b) = (shape.part_index(u), shape.part_index(v));
            entries[pair_index(r, a.min(b), a.max(b))] += 1;
        }
        Ok(Self { r, entries })
    }
}

impl Serialize for EdgeCountVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize, u64)> = self.entries().collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeCountVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<(usize, usize, u64)>::deserialize(d)?;
        let r = v.iter().map(|&(_, j, _)| j + 1).max().unwrap_or(1);
        let expected: Vec<(usize, usize)> = pairs(r).collect();
        let got: Vec<(usize, usize)> = v.iter().map(|&(i, j, _)| (i, j)).collect();
        if expected != got {
            return Err(serde::de::Error::custom(
                "edge-count vector must list every pair i < j in lexicographic order",
            ));
        }
        Ok(Self { r, entries: v.into_iter().map(|(_, _, x)| x).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_index_is_lexicographic() {
        for r in 1..8 {
            for (k, (i, j)) in pairs(r).enumerate() {
                assert_eq!(pair_index(r, i, j), k);
            }
            assert_eq!(pairs(r).count(), pair_count(r));
        }
    }

    #[test]
    fn profile_of_perfect_matchings() {
        // (2,2,2): the row-sum system forces (1,1,1)
        let shape = MultipartiteShape::parse("2,2,2").unwrap();
        let m = LabeledMatching::from_pairs(6, [(0, 2), (1, 4), (3, 5)]).unwrap();
        let p = MatchingProfile::of(&shape, &m).unwrap();
        assert_eq!(p.dense(3), vec![1, 1, 1]);

        let shape = MultipartiteShape::parse("3,3").unwrap();
        let m = LabeledMatching::from_pairs(6, [(0, 4), (1, 3), (2, 5)]).unwrap();
        assert_eq!(MatchingProfile::of(&shape, &m).unwrap().get(0, 1), 3);

        let empty = LabeledMatching::empty(6);
        assert_eq!(MatchingProfile::of(&shape, &empty).unwrap(), MatchingProfile::default());
    }

    #[test]
    fn profile_of_rejects_same_part_edges() {
        let shape = MultipartiteShape::parse("2,2").unwrap();
        let m = LabeledMatching::from_pairs(4, [(2, 3)]).unwrap();
        assert!(matches!(MatchingProfile::of(&shape, &m), Err(Error::SamePartEdge(2, 3))));
    }

    #[test]
    fn realize_round_trips_profiles() {
        let shape = MultipartiteShape::parse("3,2,2,1").unwrap();
        for p in MatchingProfile::enumerate_realizable(&shape) {
            let m = p.realize(&shape).unwrap();
            assert_eq!(MatchingProfile::of(&shape, &m).unwrap(), p);
        }
    }

    #[test]
    fn canonical_perfect_profiles() {
        let p = MatchingProfile::canonical_perfect(&MultipartiteShape::parse("2,2,2").unwrap()).unwrap();
        assert_eq!(p.dense(3), vec![1, 1, 1]);
        let shape = MultipartiteShape::uniform(3, 100).unwrap();
        let p = MatchingProfile::canonical_perfect(&shape).unwrap();
        assert_eq!(p.dense(3), vec![50, 50, 50]);
        for s in ["1,1,1,1", "4,4,4,4", "3,2,1", "5,5", "1,1"] {
            let shape = MultipartiteShape::parse(s).unwrap();
            assert!(MatchingProfile::canonical_perfect(&shape).unwrap().is_perfect_for(&shape));
        }
        assert!(MatchingProfile::canonical_perfect(&MultipartiteShape::parse("3,1").unwrap()).is_err());
        assert!(MatchingProfile::canonical_perfect(&MultipartiteShape::parse("3,3,3").unwrap()).is_err());
    }

    #[test]
    fn realizability() {
        let shape = MultipartiteShape::parse("1,1,2").unwrap();
        assert!(MatchingProfile::parse("0:1:1,0:2:1").unwrap().check_realizable(&shape).is_err());
        assert!(MatchingProfile::parse("0:2:1,1:2:1").unwrap().check_realizable(&shape).is_ok());
        assert!(MatchingProfile::parse("0:3:1").unwrap().check_realizable(&shape).is_err());
    }

    #[test]
    fn row_constraint_names_the_part() {
        let shape = MultipartiteShape::parse("2,2,2").unwrap();
        let v = EdgeCountVector::new(3, vec![2, 0, 1]).unwrap();
        assert!(matches!(v.check_pm(&shape), Err(Error::RowConstraint { part: 1, .. })));
    }

    #[test]
    fn profile_json_shape() {
        let p = MatchingProfile::parse("0:1:2,1:2:1").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[0,1,2],[1,2,1]]");
        assert!(serde_json::from_str::<MatchingProfile>("[[1,0,1]]").is_err());
    }

    proptest! {
        #[test]
        fn profile_and_vector_json_round_trip(entries in proptest::collection::vec(0u64..20, 6)) {
            let v = EdgeCountVector::new(4, entries.clone()).unwrap();
            let back: EdgeCountVector = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            prop_assert_eq!(&back, &v);
            let p = MatchingProfile::new(v.entries()).unwrap();
            let back: MatchingProfile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
