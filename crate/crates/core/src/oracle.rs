//! Brute-force ground truth on small graphs.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{GeneralGraph, Host, LabeledMatching, MatchingProfile, MultipartiteShape, Strata, StratumTable};

/// Hosts above this many vertices are refused unless a larger cap is passed
/// explicitly; `15!! ≈ 2·10^6` matchings is the practical ceiling.
pub const DEFAULT_VERTEX_CAP: usize = 16;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::VertexBudget { vertices: n, cap })
    } else {
        Ok(())
    }
}

/// Iterator over every perfect matching of a host: the smallest uncovered
/// vertex is matched first, partners in ascending order.
pub struct PerfectMatchings<'a, H: Host + ?Sized> {
    host: &'a H,
    current: LabeledMatching,
    stack: Vec<(usize, usize)>,
    state: IterState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Yielded,
    Done,
}

impl<'a, H: Host + ?Sized> PerfectMatchings<'a, H> {
    fn first_free(&self) -> Option<usize> {
        (0..self.host.vertex_count()).find(|&v| !self.current.is_covered(v))
    }

    // Extends the partial matching depth-first; `resume` re-enters the
    // search at vertex `u` with partners from `from` on.
    fn search(&mut self, mut resume: Option<(usize, usize)>) -> bool {
        let n = self.host.vertex_count();
        loop {
            let (u, from) = match resume.take() {
                Some(x) => x,
                None => match self.first_free() {
                    None => return true,
                    Some(u) => (u, u + 1),
                },
            };
            let next = (from..n).find(|&v| !self.current.is_covered(v) && self.host.adjacent(u, v));
            match next {
                Some(v) => {
                    self.current.set_pair(u, v);
                    self.stack.push((u, v));
                }
                None => match self.stack.pop() {
                    None => return false,
                    Some((pu, pv)) => {
                        self.current.remove(pu);
                        resume = Some((pu, pv + 1));
                    }
                },
            }
        }
    }
}

impl<H: Host + ?Sized> Iterator for PerfectMatchings<'_, H> {
    type Item = LabeledMatching;

    fn next(&mut self) -> Option<LabeledMatching> {
        let found = match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                if self.host.vertex_count() % 2 == 1 {
                    false
                } else {
                    self.search(None)
                }
            }
            IterState::Yielded => match self.stack.pop() {
                None => false,
                Some((pu, pv)) => {
                    self.current.remove(pu);
                    self.search(Some((pu, pv + 1)))
                }
            },
        };
        if found {
            self.state = IterState::Yielded;
            Some(self.current.clone())
        } else {
            self.state = IterState::Done;
            None
        }
    }
}

pub fn enumerate_pm<H: Host + ?Sized>(host: &H) -> Result<PerfectMatchings<'_, H>> {
    enumerate_pm_with_cap(host, DEFAULT_VERTEX_CAP)
}

pub fn enumerate_pm_with_cap<H: Host + ?Sized>(host: &H, cap: usize) -> Result<PerfectMatchings<'_, H>> {
    check_cap(host.vertex_count(), cap)?;
    Ok(PerfectMatchings {
        host,
        current: LabeledMatching::empty(host.vertex_count()),
        stack: Vec::new(),
        state: IterState::Fresh,
    })
}

/// Counts perfect matchings by overlap with `m` using a bitmask recursion;
/// `counts[ℓ]` is the number sharing exactly `ℓ` pairs with `m`.
fn overlap_counts<H: Host + ?Sized>(host: &H, m: &LabeledMatching) -> Vec<u64> {
    let n = host.vertex_count();
    let mut counts = vec![0u64; m.len() + 1];
    if n % 2 == 1 {
        return counts;
    }
    let adj: Vec<u64> = (0..n)
        .map(|u| (0..n).filter(|&v| host.adjacent(u, v)).fold(0u64, |acc, v| acc | (1 << v)))
        .collect();
    fn rec(free: u64, overlap: usize, adj: &[u64], m: &LabeledMatching, counts: &mut [u64]) {
        if free == 0 {
            counts[overlap] += 1;
            return;
        }
        let u = free.trailing_zeros() as usize;
        let rest = free & !(1 << u);
        let mut cand = rest & adj[u];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let hit = usize::from(m.contains(u, v));
            rec(rest & !(1 << v), overlap + hit, adj, m, counts);
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rec(full, 0, &adj, m, &mut counts);
    counts
}

pub fn count_pm<H: Host + ?Sized>(host: &H) -> Result<BigUint> {
    count_pm_with_cap(host, DEFAULT_VERTEX_CAP)
}

pub fn count_pm_with_cap<H: Host + ?Sized>(host: &H, cap: usize) -> Result<BigUint> {
    check_cap(host.vertex_count(), cap.min(64))?;
    let empty = LabeledMatching::empty(host.vertex_count());
    Ok(BigUint::from(overlap_counts(host, &empty)[0]))
}

fn check_subgraph<H: Host + ?Sized>(host: &H, m: &LabeledMatching) -> Result<()> {
    if m.vertex_count() != host.vertex_count() {
        return Err(Error::MismatchedVertexSets(m.vertex_count(), host.vertex_count()));
    }
    match m.pairs().find(|&(u, v)| !host.adjacent(u, v)) {
        Some((u, v)) => Err(Error::NotAnEdge(u, v)),
        None => Ok(()),
    }
}

/// `strata[ℓ] = #{P : |P ∩ M| = ℓ}` by exhaustive enumeration.
pub fn strata_oracle<H: Host + ?Sized>(host: &H, m: &LabeledMatching) -> Result<Strata> {
    strata_oracle_with_cap(host, m, DEFAULT_VERTEX_CAP)
}

pub fn strata_oracle_with_cap<H: Host + ?Sized>(host: &H, m: &LabeledMatching, cap: usize) -> Result<Strata> {
    check_cap(host.vertex_count(), cap.min(64))?;
    check_subgraph(host, m)?;
    Ok(Strata::from_u64(&overlap_counts(host, m)))
}

/// Oracle strata packaged with the shape and the profile of `m`.
pub fn strata_oracle_shape(shape: &MultipartiteShape, m: &LabeledMatching) -> Result<StratumTable> {
    let profile = MatchingProfile::of(shape, m)?;
    let strata = strata_oracle(shape, m)?;
    Ok(StratumTable { shape: shape.clone(), profile, strata })
}

/// `Pr(e ∈ R)` for a uniform perfect matching `R`.
pub fn edge_probability<H: Host + ?Sized>(host: &H, u: usize, v: usize) -> Result<BigRational> {
    let n = host.vertex_count();
    if u >= n || v >= n || !host.adjacent(u, v) {
        return Err(Error::NotAnEdge(u, v));
    }
    let (mut with, mut total) = (0u64, 0u64);
    for p in enumerate_pm(host)? {
        total += 1;
        with += u64::from(p.contains(u, v));
    }
    if total == 0 {
        return Err(Error::NoPerfectMatching);
    }
    Ok(BigRational::new(BigInt::from(with), BigInt::from(total)))
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeContainment {
    pub edge: [usize; 2],
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub graph: String,
    /// Decimal string.
    pub total: String,
    pub strata: Strata,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_containment: Option<Vec<EdgeContainment>>,
}

/// Total, strata against `m` (empty matching when `None`) and, optionally,
/// per-edge containment counts.
pub fn oracle_report<H: Host + ?Sized>(host: &H, m: Option<&LabeledMatching>, per_edge: bool) -> Result<OracleReport> {
    oracle_report_with_cap(host, m, per_edge, DEFAULT_VERTEX_CAP)
}

pub fn oracle_report_with_cap<H: Host + ?Sized>(
    host: &H,
    m: Option<&LabeledMatching>,
    per_edge: bool,
    cap: usize,
) -> Result<OracleReport> {
    let empty = LabeledMatching::empty(host.vertex_count());
    let m = m.unwrap_or(&empty);
    let strata = strata_oracle_with_cap(host, m, cap)?;
    let edge_containment = if per_edge {
        let n = host.vertex_count();
        let mut counts = vec![0u64; n * n];
        for p in enumerate_pm_with_cap(host, cap)? {
            for (a, b) in p.pairs() {
                counts[a * n + b] += 1;
            }
        }
        Some(
            (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| host.adjacent(a, b))
                .map(|(a, b)| EdgeContainment { edge: [a, b], count: counts[a * n + b] })
                .collect(),
        )
    } else {
        None
    };
    Ok(OracleReport {
        graph: host.describe(),
        total: strata.total().to_string(),
        strata,
        edge_containment,
    })
}

/// Seeded test instance: a graph on `2·n_half` vertices in which every
/// vertex misses at most `t` others, containing a planted perfect matching.
///
/// Starting from the complete graph, non-planted edges are visited in a
/// random order and each is removed with probability 1/2 when both
/// endpoints can still lose a neighbour.
pub fn random_min_degree_graph(n_half: usize, t: usize, seed: u64) -> Result<GeneralGraph> {
    random_min_degree_graph_with_cap(n_half, t, seed, DEFAULT_VERTEX_CAP)
}

pub fn random_min_degree_graph_with_cap(n_half: usize, t: usize, seed: u64, cap: usize) -> Result<GeneralGraph> {
    let n = 2 * n_half;
    if n == 0 {
        return Err(Error::InvalidParameter("n_half must be positive".into()));
    }
    check_cap(n, cap)?;
    if t >= n {
        return Err(Error::Infeasible(format!("t = {t} leaves no room for the planted matching on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let planted = LabeledMatching::from_pairs(n, order.chunks(2).map(|c| (c[0], c[1])))?;

    let mut g = GeneralGraph::complete(n);
    let mut candidates: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| !planted.contains(u, v)).collect();
    candidates.shuffle(&mut rng);
    let mut missing = vec![0usize; n];
    for (u, v) in candidates {
        if missing[u] < t && missing[v] < t && rng.random_bool(0.5) {
            g.remove_edge(u, v);
            missing[u] += 1;
            missing[v] += 1;
        }
    }
    Ok(g)
}

/// `Pr(e ∈ R)` in a complete graph `K_{2n}`: `1 / (2n − 1)`.
pub fn complete_graph_edge_probability(n_vertices: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n_vertices - 1))
}
