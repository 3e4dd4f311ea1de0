//! Three-edge rotations and degree audits of the auxiliary switching graph.
//!
//! For a perfect matching `P` and distinct vertices `(x, y, z)` the switch
//! replaces `xP(x), yP(y), zP(z)` by `xP(y), yP(z), zP(x)`. The auxiliary
//! graph `H` joins `P ∈ N_k` to `Q ∈ N_{k−1}` for every good triple taking
//! `P` to `Q`. Triples are ordered, so `H` is counted as a multigraph.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Host, LabeledMatching};
use crate::oracle::{edge_probability, enumerate_pm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwitchTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl SwitchTriple {
    pub fn new(x: usize, y: usize, z: usize) -> Result<Self> {
        if x == y || y == z || x == z {
            return Err(Error::DegenerateTriple);
        }
        Ok(Self { x, y, z })
    }

    /// The `(x, z, y)` triple, which undoes this switch.
    pub fn inverse(self) -> Self {
        Self { x: self.x, y: self.z, z: self.y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoodnessMode {
    /// Arbitrary host; the new pairs must be host edges.
    MinDegree,
    /// Complete multipartite host; `x, y, z` share a part.
    Multipartite,
}

/// Which stratum a matching is audited from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `N_k`, counting good triples.
    Upper,
    /// `N_{k−1}`, counting reverse-good triples.
    Lower,
}

fn check_covered(p: &LabeledMatching, t: SwitchTriple) -> Result<()> {
    for v in [t.x, t.y, t.z] {
        p.partner(v)?;
    }
    Ok(())
}

fn six_distinct(p: &LabeledMatching, t: SwitchTriple) -> bool {
    let six = [t.x, t.y, t.z, p.mate(t.x), p.mate(t.y), p.mate(t.z)];
    (0..6).all(|i| (i + 1..6).all(|j| six[i] != six[j]))
}

/// The `(x, y, z)`-switch of `p`. The result need not be a subgraph of any
/// host.
pub fn apply_switch(p: &LabeledMatching, t: SwitchTriple) -> Result<LabeledMatching> {
    let t = SwitchTriple::new(t.x, t.y, t.z)?;
    check_covered(p, t)?;
    if !six_distinct(p, t) {
        return Err(Error::DegenerateTriple);
    }
    Ok(switch_unchecked(p, t))
}

fn switch_unchecked(p: &LabeledMatching, t: SwitchTriple) -> LabeledMatching {
    let (px, py, pz) = (p.mate(t.x), p.mate(t.y), p.mate(t.z));
    let mut q = p.clone();
    q.set_pair(t.x, py);
    q.set_pair(t.y, pz);
    q.set_pair(t.z, px);
    q
}

fn same_part<H: Host + ?Sized>(host: &H, t: SwitchTriple) -> Result<bool> {
    let part = |v| host.part_of(v).ok_or(Error::NotMultipartite);
    let px = part(t.x)?;
    Ok(part(t.y)? == px && part(t.z)? == px)
}

/// Whether `t` is good for `p` relative to `m`.
pub fn is_good<H: Host + ?Sized>(
    p: &LabeledMatching,
    m: &LabeledMatching,
    t: SwitchTriple,
    mode: GoodnessMode,
    host: &H,
) -> Result<bool> {
    check_covered(p, t)?;
    if t.x == t.y || t.y == t.z || t.x == t.z {
        return Ok(false);
    }
    good_unchecked(p, m, t, mode, host)
}

fn good_unchecked<H: Host + ?Sized>(
    p: &LabeledMatching,
    m: &LabeledMatching,
    t: SwitchTriple,
    mode: GoodnessMode,
    host: &H,
) -> Result<bool> {
    let (x, y, z) = (t.x, t.y, t.z);
    let (px, py, pz) = (p.mate(x), p.mate(y), p.mate(z));
    let shared = m.contains(x, px) && !m.contains(y, py) && !m.contains(z, pz) && !m.contains(y, pz);
    Ok(match mode {
        GoodnessMode::MinDegree => shared && host.adjacent(x, py) && host.adjacent(y, pz) && host.adjacent(z, px),
        GoodnessMode::Multipartite => same_part(host, t)? && shared,
    })
}

/// Whether `t` is reverse good for `q` relative to `m`.
pub fn is_reverse_good<H: Host + ?Sized>(
    q: &LabeledMatching,
    m: &LabeledMatching,
    t: SwitchTriple,
    mode: GoodnessMode,
    host: &H,
) -> Result<bool> {
    check_covered(q, t)?;
    if t.x == t.y || t.y == t.z || t.x == t.z {
        return Ok(false);
    }
    reverse_good_unchecked(q, m, t, mode, host)
}

fn reverse_good_unchecked<H: Host + ?Sized>(
    q: &LabeledMatching,
    m: &LabeledMatching,
    t: SwitchTriple,
    mode: GoodnessMode,
    host: &H,
) -> Result<bool> {
    let (x, y, z) = (t.x, t.y, t.z);
    let (qx, qy, qz) = (q.mate(x), q.mate(y), q.mate(z));
    let shared = m.contains(x, qz) && !m.contains(y, qx) && !m.contains(z, qy) && !m.contains(y, qy);
    Ok(match mode {
        GoodnessMode::MinDegree => shared && host.adjacent(x, qz) && host.adjacent(y, qx) && host.adjacent(z, qy),
        GoodnessMode::Multipartite => same_part(host, t)? && shared && !m.contains(z, qz),
    })
}

fn ordered_triples(n: usize) -> impl Iterator<Item = SwitchTriple> {
    (0..n).flat_map(move |x| {
        (0..n).flat_map(move |y| (0..n).map(move |z| SwitchTriple { x, y, z }))
    })
    .filter(|t| t.x != t.y && t.y != t.z && t.x != t.z)
}

/// Exact degree of `matching` in `H` between `N_k` and `N_{k−1}`.
pub fn degree_in_h<H: Host + ?Sized>(
    matching: &LabeledMatching,
    side: Side,
    m: &LabeledMatching,
    k: usize,
    mode: GoodnessMode,
    host: &H,
) -> Result<u64> {
    if !matching.is_perfect() || matching.vertex_count() != host.vertex_count() {
        return Err(Error::NotPerfect);
    }
    let expected = match side {
        Side::Upper => k,
        Side::Lower => k.checked_sub(1).ok_or_else(|| Error::InvalidParameter("k must be at least 1".into()))?,
    };
    let actual = matching.overlap(m)?;
    if actual != expected {
        return Err(Error::StratumMismatch { expected, actual });
    }
    degree_unchecked(matching, side, m, mode, host)
}

fn degree_unchecked<H: Host + ?Sized>(
    matching: &LabeledMatching,
    side: Side,
    m: &LabeledMatching,
    mode: GoodnessMode,
    host: &H,
) -> Result<u64> {
    let mut deg = 0;
    for t in ordered_triples(host.vertex_count()) {
        let hit = match side {
            Side::Upper => good_unchecked(matching, m, t, mode, host)?,
            Side::Lower => reverse_good_unchecked(matching, m, t, mode, host)?,
        };
        deg += u64::from(hit);
    }
    Ok(deg)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SideSummary {
    pub size: u64,
    pub degree_sum: u64,
    pub min_degree: Option<u64>,
    pub max_degree: Option<u64>,
    /// degree → number of matchings with that degree.
    pub histogram: BTreeMap<u64, u64>,
    /// Leading-order degree prediction, informational only.
    pub predicted_degree: f64,
}

impl SideSummary {
    fn from_degrees(degrees: &[u64], predicted_degree: f64) -> Self {
        let mut histogram = BTreeMap::new();
        for &d in degrees {
            *histogram.entry(d).or_insert(0) += 1;
        }
        Self {
            size: degrees.len() as u64,
            degree_sum: degrees.iter().sum(),
            min_degree: degrees.iter().copied().min(),
            max_degree: degrees.iter().copied().max(),
            histogram,
            predicted_degree,
        }
    }

    /// Observed minimum minus the leading-order prediction.
    pub fn min_delta(&self) -> Option<f64> {
        self.min_degree.map(|d| d as f64 - self.predicted_degree)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HandshakeReport {
    pub graph: String,
    pub mode: GoodnessMode,
    pub k: usize,
    /// `N_k`.
    pub upper: SideSummary,
    /// `N_{k−1}`.
    pub lower: SideSummary,
    /// One of the strata is empty.
    pub vacuous: bool,
}

impl HandshakeReport {
    pub fn sums_agree(&self) -> bool {
        self.upper.degree_sum == self.lower.degree_sum
    }
}

/// Leading terms of the degree claims: `2k·w²` upstairs and `w·w′`
/// downstairs, where `w` is the number of same-part (or all) vertices and
/// `w′` the number of vertices outside a part.
fn predictions<H: Host + ?Sized>(host: &H, k: usize, mode: GoodnessMode) -> (f64, f64) {
    let total = host.vertex_count() as f64;
    match mode {
        GoodnessMode::MinDegree => (2.0 * k as f64 * total * total, total * total),
        GoodnessMode::Multipartite => {
            let r = (0..host.vertex_count()).filter_map(|v| host.part_of(v)).max().map_or(1, |p| p + 1) as f64;
            let within = total / r;
            let outside = if r > 1.0 { total / (r - 1.0) } else { 0.0 };
            (2.0 * k as f64 * within * within, outside * within)
        }
    }
}

/// Exhaustive degree audit of `H` between `N_k` and `N_{k−1}`.
pub fn handshake_audit<H: Host + ?Sized>(host: &H, m: &LabeledMatching, k: usize, mode: GoodnessMode) -> Result<HandshakeReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if m.vertex_count() != host.vertex_count() {
        return Err(Error::MismatchedVertexSets(m.vertex_count(), host.vertex_count()));
    }
    if mode == GoodnessMode::Multipartite && host.part_of(0).is_none() && host.vertex_count() > 0 {
        return Err(Error::NotMultipartite);
    }
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for p in enumerate_pm(host)? {
        let l = p.overlap_unchecked(m);
        if l == k {
            upper.push(p);
        } else if l + 1 == k {
            lower.push(p);
        }
    }
    let degrees = |set: &[LabeledMatching], side| -> Result<Vec<u64>> {
        set.par_iter().map(|p| degree_unchecked(p, side, m, mode, host)).collect()
    };
    let up = degrees(&upper, Side::Upper)?;
    let down = degrees(&lower, Side::Lower)?;
    let (pu, pl) = predictions(host, k, mode);
    Ok(HandshakeReport {
        graph: host.describe(),
        mode,
        k,
        vacuous: up.is_empty() || down.is_empty(),
        upper: SideSummary::from_degrees(&up, pu),
        lower: SideSummary::from_degrees(&down, pl),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeSwitchReport {
    pub graph: String,
    pub edge: [usize; 2],
    /// `|N_e|`: matchings containing the edge.
    pub containing: u64,
    /// `|N_e^c|`.
    pub avoiding: u64,
    pub upper_degree_sum: u64,
    pub lower_degree_sum: u64,
    pub max_lower_degree: u64,
    /// The degrees of `N_e^c` built from the `N_e` side agree with the
    /// direct count `[Q(y) ∼ Q(x)]`.
    pub sides_consistent: bool,
    #[serde(serialize_with = "crate::render::ratio")]
    pub probability: BigRational,
    pub probability_matches_oracle: bool,
}

impl EdgeSwitchReport {
    pub fn holds(&self) -> bool {
        self.max_lower_degree <= 1
            && self.upper_degree_sum == self.lower_degree_sum
            && self.sides_consistent
            && self.probability_matches_oracle
    }
}

/// Audits the single-edge switch for `e = xy`: `P ∋ xy` is joined to
/// `Q = P ∖ {uv, xy} ∪ {uy, xv}` for every other pair `uv` of `P` (ordered)
/// whose new pairs are host edges.
pub fn edge_switch_audit<H: Host + ?Sized>(host: &H, x: usize, y: usize) -> Result<EdgeSwitchReport> {
    let n = host.vertex_count();
    if x >= n || y >= n || !host.adjacent(x, y) {
        return Err(Error::NotAnEdge(x, y));
    }
    let (mut with, mut without) = (Vec::new(), Vec::new());
    for p in enumerate_pm(host)? {
        if p.contains(x, y) {
            with.push(p);
        } else {
            without.push(p);
        }
    }
    if with.is_empty() && without.is_empty() {
        return Err(Error::NoPerfectMatching);
    }

    let mut built: HashMap<LabeledMatching, u64> = HashMap::new();
    let mut upper_sum = 0;
    for p in &with {
        for u in (0..n).filter(|&u| u != x && u != y) {
            let v = p.mate(u);
            if host.adjacent(u, y) && host.adjacent(x, v) {
                let mut q = p.clone();
                q.set_pair(u, y);
                q.set_pair(x, v);
                *built.entry(q).or_insert(0) += 1;
                upper_sum += 1;
            }
        }
    }

    let direct = |q: &LabeledMatching| u64::from(host.adjacent(q.mate(y), q.mate(x)));
    let sides_consistent = built.keys().all(|q| !q.contains(x, y))
        && without.iter().all(|q| built.get(q).copied().unwrap_or(0) == direct(q))
        && built.len() as u64 == without.iter().filter(|q| direct(q) > 0).count() as u64;
    let lower_sum = without.iter().map(|q| built.get(q).copied().unwrap_or(0)).sum();
    let max_lower_degree = without.iter().map(|q| built.get(q).copied().unwrap_or(0)).max().unwrap_or(0);

    let total = (with.len() + without.len()) as u64;
    let probability = BigRational::new(BigInt::from(with.len()), BigInt::from(total));
    let oracle = edge_probability(host, x, y)?;
    Ok(EdgeSwitchReport {
        graph: host.describe(),
        edge: [x, y],
        containing: with.len() as u64,
        avoiding: without.len() as u64,
        upper_degree_sum: upper_sum,
        lower_degree_sum: lower_sum,
        max_lower_degree,
        sides_consistent,
        probability_matches_oracle: probability == oracle,
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GeneralGraph, MatchingProfile, MultipartiteShape};
    use crate::oracle::random_min_degree_graph;

    // 1-based pair lists in the examples are shifted to 0-based here.
    fn m(n: usize, pairs: &[(usize, usize)]) -> LabeledMatching {
        LabeledMatching::from_pairs(n, pairs.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    fn t(x: usize, y: usize, z: usize) -> SwitchTriple {
        SwitchTriple::new(x - 1, y - 1, z - 1).unwrap()
    }

    #[test]
    fn rotation_example() {
        let p = m(6, &[(1, 4), (2, 5), (3, 6)]);
        assert_eq!(apply_switch(&p, t(1, 2, 3)).unwrap(), m(6, &[(1, 5), (2, 6), (3, 4)]));
        assert_eq!(SwitchTriple::new(0, 0, 2), Err(Error::DegenerateTriple));
        let degenerate = SwitchTriple { x: 0, y: 0, z: 2 };
        assert_eq!(apply_switch(&p, degenerate), Err(Error::DegenerateTriple));
        // y = P(x)
        assert_eq!(apply_switch(&p, t(1, 4, 2)), Err(Error::DegenerateTriple));
    }

    #[test]
    fn good_examples() {
        let k6 = GeneralGraph::complete(6);
        let mm = m(6, &[(1, 2), (3, 4), (5, 6)]);
        let p = m(6, &[(1, 2), (3, 5), (4, 6)]);
        assert!(is_good(&p, &mm, t(1, 3, 4), GoodnessMode::MinDegree, &k6).unwrap());
        assert!(!is_good(&p, &mm, t(3, 1, 4), GoodnessMode::MinDegree, &k6).unwrap());
        let q = m(6, &[(1, 5), (3, 6), (2, 4)]);
        assert!(is_reverse_good(&q, &mm, t(1, 3, 4), GoodnessMode::MinDegree, &k6).unwrap());
        assert!(!is_reverse_good(&q, &mm, t(3, 1, 4), GoodnessMode::MinDegree, &k6).unwrap());
        assert!(is_good(&LabeledMatching::empty(6), &mm, t(1, 3, 4), GoodnessMode::MinDegree, &k6).is_err());
    }

    #[test]
    fn multipartite_mode_needs_one_part() {
        let shape = MultipartiteShape::uniform(3, 4).unwrap();
        let mm = MatchingProfile::canonical_perfect(&shape).unwrap().realize(&shape).unwrap();
        let p = enumerate_pm(&shape).unwrap().next().unwrap();
        // 0 and 4 are in different parts
        let tr = SwitchTriple::new(0, 4, 1).unwrap();
        assert!(!is_good(&p, &mm, tr, GoodnessMode::Multipartite, &shape).unwrap());
        let k6 = GeneralGraph::complete(6);
        let pm = m(6, &[(1, 2), (3, 4), (5, 6)]);
        assert_eq!(is_good(&pm, &pm, t(1, 3, 5), GoodnessMode::Multipartite, &k6), Err(Error::NotMultipartite));
    }

    #[test]
    fn degree_examples() {
        let k6 = GeneralGraph::complete(6);
        let mm = m(6, &[(1, 2), (3, 4), (5, 6)]);
        let p = m(6, &[(1, 2), (3, 5), (4, 6)]);
        assert_eq!(degree_in_h(&p, Side::Upper, &mm, 1, GoodnessMode::MinDegree, &k6).unwrap(), 8);
        let disjoint = m(6, &[(1, 3), (2, 5), (4, 6)]);
        assert_eq!(degree_in_h(&disjoint, Side::Upper, &mm, 0, GoodnessMode::MinDegree, &k6).unwrap(), 0);
        assert_eq!(
            degree_in_h(&p, Side::Upper, &mm, 2, GoodnessMode::MinDegree, &k6),
            Err(Error::StratumMismatch { expected: 2, actual: 1 })
        );

        let shape = MultipartiteShape::uniform(3, 2).unwrap();
        let mm = MatchingProfile::canonical_perfect(&shape).unwrap().realize(&shape).unwrap();
        for p in enumerate_pm(&shape).unwrap().filter(|p| p.overlap(&mm).unwrap() == 1) {
            assert_eq!(degree_in_h(&p, Side::Upper, &mm, 1, GoodnessMode::Multipartite, &shape).unwrap(), 0);
        }
    }

    #[test]
    fn k6_handshake() {
        let k6 = GeneralGraph::complete(6);
        let mm = m(6, &[(1, 2), (3, 4), (5, 6)]);
        let rep = handshake_audit(&k6, &mm, 1, GoodnessMode::MinDegree).unwrap();
        assert_eq!((rep.upper.size, rep.lower.size), (6, 8));
        assert_eq!((rep.upper.degree_sum, rep.lower.degree_sum), (48, 48));
        assert_eq!((rep.upper.min_degree, rep.upper.max_degree), (Some(8), Some(8)));
        assert!(!rep.vacuous);

        let rep = handshake_audit(&k6, &mm, 2, GoodnessMode::MinDegree).unwrap();
        assert!(rep.vacuous);
        assert_eq!(rep.upper.size, 0);
    }

    // Q = switch(P, t) with t good for P ⇔ t reverse good for Q, and the
    // good switch lowers the overlap by exactly one.
    fn correspondence<H: Host>(host: &H, mm: &LabeledMatching, mode: GoodnessMode) {
        let all: std::collections::HashSet<LabeledMatching> = enumerate_pm(host).unwrap().collect();
        let n = host.vertex_count();
        for q in &all {
            for tr in ordered_triples(n) {
                let rev = is_reverse_good(q, mm, tr, mode, host).unwrap();
                let p = apply_switch(q, tr.inverse());
                let fwd = match &p {
                    Ok(p) => {
                        all.contains(p)
                            && is_good(p, mm, tr, mode, host).unwrap()
                            && apply_switch(p, tr).unwrap() == *q
                    }
                    Err(_) => false,
                };
                assert_eq!(rev, fwd, "{q:?} {tr:?}");
                if fwd {
                    let p = p.unwrap();
                    assert_eq!(p.overlap(mm).unwrap(), q.overlap(mm).unwrap() + 1);
                }
            }
        }
    }

    #[test]
    fn correspondence_min_degree() {
        let k6 = GeneralGraph::complete(6);
        correspondence(&k6, &m(6, &[(1, 2), (3, 4), (5, 6)]), GoodnessMode::MinDegree);
        let g = random_min_degree_graph(4, 2, 3).unwrap();
        let mm = enumerate_pm(&g).unwrap().next().unwrap();
        correspondence(&g, &mm, GoodnessMode::MinDegree);
    }

    #[test]
    fn correspondence_multipartite() {
        for parts in ["3,3", "3,3,2", "4,4", "3,3,3,1"] {
            let shape = MultipartiteShape::parse(parts).unwrap();
            let mm = MatchingProfile::canonical_perfect(&shape).unwrap().realize(&shape).unwrap();
            correspondence(&shape, &mm, GoodnessMode::Multipartite);
        }
    }

    #[test]
    fn edge_switch_examples() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let rep = edge_switch_audit(&GeneralGraph::complete(4), 0, 1).unwrap();
        assert_eq!(rep.probability, q(1, 3));
        assert!(rep.holds());
        let single = GeneralGraph::from_edges(2, [(0, 1)]).unwrap();
        let rep = edge_switch_audit(&single, 0, 1).unwrap();
        assert_eq!((rep.avoiding, rep.probability.clone()), (0, q(1, 1)));
        assert!(rep.holds());
        let rep = edge_switch_audit(&GeneralGraph::complete(6), 2, 5).unwrap();
        assert_eq!(rep.probability, q(1, 5));
        assert!(rep.holds());
        let k22 = MultipartiteShape::parse("2,2").unwrap();
        assert!(edge_switch_audit(&k22, 0, 1).is_err());
        assert!(edge_switch_audit(&k22, 0, 2).unwrap().holds());
    }

    #[test]
    fn inverse_switch_round_trips() {
        let p = m(8, &[(1, 5), (2, 6), (3, 7), (4, 8)]);
        for tr in ordered_triples(8) {
            if let Ok(q) = apply_switch(&p, tr) {
                assert!(q.is_perfect());
                assert_eq!(apply_switch(&q, tr.inverse()).unwrap(), p);
            }
        }
    }
}
