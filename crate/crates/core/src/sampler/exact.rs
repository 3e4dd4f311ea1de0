use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::{stream_rng, SamplerConfig};
use crate::error::{Error, Result};
use crate::exact::{subprofile_count, weighted_vectors, ExactEngine};
use crate::model::{pairs, EdgeCountVector, LabeledMatching, MatchingProfile, MultipartiteShape};

/// Refuse shapes with more edge-count vectors than this.
pub const DEFAULT_VECTOR_CAP: usize = 5_000_000;

/// Largest sub-profile count for which the conditional sampler computes the
/// exact acceptance probability to size its rejection budget.
const BUDGET_SUBPROFILES: u128 = 10_000;

/// Uniform integer in `0..bound` by rejection on `bits(bound)` random bits.
fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    debug_assert!(!bound.is_zero());
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask = match bits % 8 {
        0 => 0xff,
        b => (1u8 << b) - 1,
    };
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill(&mut buf[..]);
        buf[bytes - 1] &= top_mask;
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

/// Draws an edge-count vector with probability `weight(v) / pm`.
#[derive(Clone, Debug)]
pub struct VectorSampler {
    vectors: Vec<EdgeCountVector>,
    cumulative: Vec<BigUint>,
}

impl VectorSampler {
    pub fn new(shape: &MultipartiteShape) -> Result<Self> {
        Self::with_cap(shape, DEFAULT_VECTOR_CAP)
    }

    pub fn with_cap(shape: &MultipartiteShape, cap: usize) -> Result<Self> {
        let weighted = weighted_vectors(shape, cap)?;
        if weighted.is_empty() {
            return Err(Error::NoPerfectMatching);
        }
        let mut acc = BigUint::zero();
        let mut vectors = Vec::with_capacity(weighted.len());
        let mut cumulative = Vec::with_capacity(weighted.len());
        for (v, w) in weighted {
            acc += w;
            vectors.push(v);
            cumulative.push(acc.clone());
        }
        Ok(Self { vectors, cumulative })
    }

    pub fn total(&self) -> &BigUint {
        self.cumulative.last().expect("nonempty by construction")
    }

    pub fn vectors(&self) -> &[EdgeCountVector] {
        &self.vectors
    }

    /// Unnormalized weight of the `i`th vector.
    pub fn weight(&self, i: usize) -> BigUint {
        match i {
            0 => self.cumulative[0].clone(),
            _ => &self.cumulative[i] - &self.cumulative[i - 1],
        }
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = uniform_below(rng, self.total());
        self.cumulative.partition_point(|c| c <= &u)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &EdgeCountVector {
        &self.vectors[self.sample_index(rng)]
    }
}

/// Exactly uniform perfect matchings of a complete multipartite graph:
/// draw `v`, then split every part into random blocks of sizes `v_{i,j}`
/// and pair block `(i, j)` with block `(j, i)` in random order.
#[derive(Clone, Debug)]
pub struct UniformSampler {
    shape: MultipartiteShape,
    vectors: VectorSampler,
}

impl UniformSampler {
    pub fn new(shape: &MultipartiteShape) -> Result<Self> {
        Ok(Self { shape: shape.clone(), vectors: VectorSampler::new(shape)? })
    }

    pub fn shape(&self) -> &MultipartiteShape {
        &self.shape
    }

    pub fn vector_sampler(&self) -> &VectorSampler {
        &self.vectors
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LabeledMatching {
        let v = self.vectors.sample(rng);
        let r = self.shape.r();
        // blocks[i][j]: vertices of part i matched into part j
        let mut blocks: Vec<Vec<&[usize]>> = Vec::with_capacity(r);
        let shuffled: Vec<Vec<usize>> = (0..r)
            .map(|i| {
                let mut verts: Vec<usize> = self.shape.part_range(i).collect();
                verts.shuffle(rng);
                verts
            })
            .collect();
        for (i, verts) in shuffled.iter().enumerate() {
            let mut row = Vec::with_capacity(r);
            let mut off = 0;
            for j in 0..r {
                let c = v.get(i, j) as usize;
                row.push(&verts[off..off + c]);
                off += c;
            }
            blocks.push(row);
        }
        let mut m = LabeledMatching::empty(self.shape.total());
        for (i, j) in pairs(r) {
            for (&a, &b) in blocks[i][j].iter().zip(blocks[j][i]) {
                m.set_pair(a, b);
            }
        }
        m
    }
}

/// `count` uniform samples; sample `i` uses stream `i`.
pub fn sample_uniform_stream(sampler: &UniformSampler, cfg: &SamplerConfig) -> Result<Vec<LabeledMatching>> {
    cfg.validate()?;
    Ok((0..cfg.sample_count as u64)
        .into_par_iter()
        .map(|i| sampler.sample(&mut stream_rng(cfg.seed, i)))
        .collect())
}

/// Uniform perfect matchings `Q` with `Q ∩ M = M*` exactly: the pairs of
/// `M*` are fixed, the rest is sampled uniformly on the reduced shape and
/// rejected until it avoids every remaining pair of `M`.
#[derive(Clone, Debug)]
pub struct ConditionalSampler {
    vertex_count: usize,
    fixed: LabeledMatching,
    /// Reduced label → original label.
    labels: Vec<usize>,
    reduced: Option<UniformSampler>,
    /// Remaining pairs of `M` in reduced labels.
    avoid: LabeledMatching,
    budget: u64,
    /// Size of the conditioned event, when it was computed.
    event_size: Option<BigUint>,
}

impl ConditionalSampler {
    pub fn new(shape: &MultipartiteShape, m: &LabeledMatching, m_star: &LabeledMatching) -> Result<Self> {
        m.check_on_shape(shape)?;
        m_star.check_on_shape(shape)?;
        if !m_star.is_subset_of(m) {
            return Err(Error::InvalidParameter("m_star is not contained in M".into()));
        }
        let n = shape.total();
        let mut reduced_parts = Vec::new();
        let mut labels = Vec::new();
        for i in 0..shape.r() {
            let free: Vec<usize> = shape.part_range(i).filter(|&x| !m_star.is_covered(x)).collect();
            if !free.is_empty() {
                reduced_parts.push(free.len());
                labels.extend(free);
            }
        }
        let mut sampler = Self {
            vertex_count: n,
            fixed: m_star.clone(),
            labels,
            reduced: None,
            avoid: LabeledMatching::empty(0),
            budget: 1,
            event_size: Some(BigUint::from(1u8)),
        };
        if reduced_parts.is_empty() {
            return Ok(sampler);
        }

        let reduced_shape = MultipartiteShape::new(reduced_parts)?;
        let mut relabel = vec![usize::MAX; n];
        for (new, &old) in sampler.labels.iter().enumerate() {
            relabel[old] = new;
        }
        let remaining = m.pairs().filter(|&(u, v)| !m_star.contains(u, v)).map(|(u, v)| (relabel[u], relabel[v]));
        sampler.avoid = LabeledMatching::from_pairs(reduced_shape.total(), remaining)?;

        let uniform = match UniformSampler::new(&reduced_shape) {
            Ok(u) => u,
            Err(Error::NoPerfectMatching) => {
                return Err(Error::RejectionBudget { attempts: 0, exact_count: Some("0".into()) });
            }
            Err(e) => return Err(e),
        };
        let profile = MatchingProfile::of(&reduced_shape, &sampler.avoid)?;
        if subprofile_count(&profile) <= BUDGET_SUBPROFILES {
            let table = ExactEngine::default().strata(&reduced_shape, &profile)?;
            let hits = table.strata.get(0);
            if hits.is_zero() {
                return Err(Error::RejectionBudget { attempts: 0, exact_count: Some("0".into()) });
            }
            let total = uniform.vector_sampler().total();
            let expected = (total + &hits - 1u8) / &hits;
            sampler.budget = (expected * 10_000u32).to_u64().unwrap_or(u64::MAX);
            sampler.event_size = Some(hits);
        } else {
            sampler.budget = 1_000_000;
            sampler.event_size = None;
        }
        sampler.reduced = Some(uniform);
        Ok(sampler)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Number of matchings in the conditioned event, when known.
    pub fn event_size(&self) -> Option<&BigUint> {
        self.event_size.as_ref()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LabeledMatching> {
        let Some(uniform) = &self.reduced else {
            return Ok(self.fixed.clone());
        };
        for _ in 0..self.budget {
            let q = uniform.sample(rng);
            if q.overlap_unchecked(&self.avoid) == 0 {
                let mut out = self.fixed.clone();
                for (a, b) in q.pairs() {
                    out.set_pair(self.labels[a], self.labels[b]);
                }
                debug_assert_eq!(out.vertex_count(), self.vertex_count);
                return Ok(out);
            }
        }
        Err(Error::RejectionBudget {
            attempts: self.budget,
            exact_count: self.event_size.as_ref().map(|c| c.to_string()),
        })
    }
}

pub fn sample_conditional_stream(sampler: &ConditionalSampler, cfg: &SamplerConfig) -> Result<Vec<LabeledMatching>> {
    cfg.validate()?;
    (0..cfg.sample_count as u64)
        .into_par_iter()
        .map(|i| sampler.sample(&mut stream_rng(cfg.seed, i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_pm;
    use std::collections::HashMap;

    fn shape(s: &str) -> MultipartiteShape {
        MultipartiteShape::parse(s).unwrap()
    }

    fn perfect_m(s: &MultipartiteShape) -> LabeledMatching {
        MatchingProfile::canonical_perfect(s).unwrap().realize(s).unwrap()
    }

    #[test]
    fn uniform_below_stays_below() {
        let mut rng = stream_rng(1, 0);
        for b in [1u64, 2, 3, 255, 256, 257, 1 << 40] {
            let bound = BigUint::from(b);
            for _ in 0..200 {
                assert!(uniform_below(&mut rng, &bound) < bound);
            }
        }
    }

    #[test]
    fn forced_vectors() {
        let mut rng = stream_rng(2, 0);
        let s = VectorSampler::new(&shape("2,2,2")).unwrap();
        assert_eq!(s.sample(&mut rng).as_slice(), &[1, 1, 1]);
        let s = VectorSampler::new(&shape("5,5")).unwrap();
        assert_eq!(s.sample(&mut rng).as_slice(), &[5]);
        assert_eq!(VectorSampler::new(&shape("3,1")).unwrap_err(), Error::NoPerfectMatching);
        assert!(VectorSampler::new(&shape("3,3,3")).is_err());
    }

    #[test]
    fn vector_frequencies_within_three_standard_errors() {
        let sh = shape("2,2,2,2");
        let s = VectorSampler::new(&sh).unwrap();
        let total = s.total().to_f64().unwrap();
        let draws = 100_000;
        let mut rng = stream_rng(3, 0);
        let mut counts = vec![0u64; s.vectors().len()];
        for _ in 0..draws {
            counts[s.sample_index(&mut rng)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let p = s.weight(i).to_f64().unwrap() / total;
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((c as f64 / draws as f64 - p).abs() <= 3.0 * se, "vector {i}");
        }
    }

    #[test]
    fn samples_are_perfect_matchings_of_the_shape() {
        for s in ["1,1", "2,2,2", "3,2,1", "1,1,1,1,1,1", "4,3,3,2"] {
            let sh = shape(s);
            let u = UniformSampler::new(&sh).unwrap();
            let mut rng = stream_rng(4, 0);
            for _ in 0..200 {
                let m = u.sample(&mut rng);
                assert!(m.is_perfect());
                m.check_on_shape(&sh).unwrap();
            }
        }
    }

    #[test]
    fn k22_is_balanced() {
        let u = UniformSampler::new(&shape("2,2")).unwrap();
        let samples = sample_uniform_stream(&u, &SamplerConfig::new(5, 10_000)).unwrap();
        let first = enumerate_pm(&shape("2,2")).unwrap().next().unwrap();
        let freq = samples.iter().filter(|m| **m == first).count() as f64 / 1e4;
        assert!((freq - 0.5).abs() <= 0.02);
    }

    #[test]
    fn stream_is_deterministic() {
        let u = UniformSampler::new(&shape("3,3,2")).unwrap();
        let cfg = SamplerConfig::new(9, 500);
        assert_eq!(sample_uniform_stream(&u, &cfg).unwrap(), sample_uniform_stream(&u, &cfg).unwrap());
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let one = single.install(|| sample_uniform_stream(&u, &cfg).unwrap());
        assert_eq!(one, sample_uniform_stream(&u, &cfg).unwrap());
    }

    #[test]
    fn conditional_full_star_is_m() {
        let sh = shape("2,2,2");
        let m = perfect_m(&sh);
        let c = ConditionalSampler::new(&sh, &m, &m).unwrap();
        assert_eq!(c.sample(&mut stream_rng(0, 0)).unwrap(), m);
    }

    #[test]
    fn conditional_avoiding_is_uniform_on_n0() {
        let sh = shape("2,2,2");
        let m = perfect_m(&sh);
        let c = ConditionalSampler::new(&sh, &m, &LabeledMatching::empty(6)).unwrap();
        assert_eq!(c.event_size(), Some(&BigUint::from(4u8)));
        // Pr(avoid) = 4/8, so 2 · 10^4 attempts
        assert_eq!(c.budget(), 20_000);
        let samples = sample_conditional_stream(&c, &SamplerConfig::new(6, 10_000)).unwrap();
        let mut freq: HashMap<&LabeledMatching, u64> = HashMap::new();
        for q in &samples {
            assert_eq!(q.overlap(&m).unwrap(), 0);
            *freq.entry(q).or_insert(0) += 1;
        }
        assert_eq!(freq.len(), 4);
        for &f in freq.values() {
            assert!((f as f64 / 1e4 - 0.25).abs() <= 0.02);
        }
    }

    #[test]
    fn conditional_exact_star() {
        let sh = shape("3,3,2");
        let m = perfect_m(&sh);
        let (u, v) = m.pairs().next().unwrap();
        let star = LabeledMatching::from_pairs(8, [(u, v)]).unwrap();
        let c = ConditionalSampler::new(&sh, &m, &star).unwrap();
        let mut rng = stream_rng(8, 0);
        for _ in 0..200 {
            let q = c.sample(&mut rng).unwrap();
            assert!(q.is_perfect());
            assert!(q.contains(u, v));
            assert_eq!(q.overlap(&m).unwrap(), 1);
        }
    }

    #[test]
    fn conditional_rejects_foreign_star_and_empty_events() {
        let sh = shape("2,2,2");
        let m = perfect_m(&sh);
        let other = enumerate_pm(&sh).unwrap().find(|p| p.overlap(&m).unwrap() == 0).unwrap();
        let (u, v) = other.pairs().next().unwrap();
        let foreign = LabeledMatching::from_pairs(6, [(u, v)]).unwrap();
        assert!(ConditionalSampler::new(&sh, &m, &foreign).is_err());

        // (1,1): the only matching is M itself, so avoiding M is impossible
        let sh = shape("1,1");
        let m = perfect_m(&sh);
        let err = ConditionalSampler::new(&sh, &m, &LabeledMatching::empty(2)).unwrap_err();
        assert_eq!(err, Error::RejectionBudget { attempts: 0, exact_count: Some("0".into()) });
    }

    #[test]
    fn vector_cap_is_enforced() {
        let sh = MultipartiteShape::complete_graph(8).unwrap();
        assert!(matches!(VectorSampler::with_cap(&sh, 1000), Err(Error::Intractable(_))));
    }
}
