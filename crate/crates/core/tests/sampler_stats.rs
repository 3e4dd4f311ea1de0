use std::collections::HashMap;

use matchlab::exact;
use matchlab::oracle::enumerate_pm;
use matchlab::sampler::{
    sample_conditional_stream, sample_uniform_stream, ConditionalSampler, SamplerConfig, UniformSampler,
};
use matchlab::stats::{chi_square_uniform, tv_empirical, tv_exact};
use matchlab::{LabeledMatching, MatchingProfile, MultipartiteShape};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn shape(s: &str) -> MultipartiteShape {
    MultipartiteShape::parse(s).unwrap()
}

fn counts_over(all: &[LabeledMatching], samples: &[LabeledMatching]) -> Vec<u64> {
    let mut freq: HashMap<&LabeledMatching, u64> = HashMap::new();
    for s in samples {
        *freq.entry(s).or_insert(0) += 1;
    }
    assert!(freq.keys().all(|k| all.contains(k)), "sample outside the support");
    all.iter().map(|m| freq.get(m).copied().unwrap_or(0)).collect()
}

#[test]
fn exact_sampler_is_uniform_on_small_shapes() {
    for s in ["2,2,2", "3,3", "2,2,1,1", "3,2,1", "2,2,2,2"] {
        let sh = shape(s);
        let all: Vec<LabeledMatching> = enumerate_pm(&sh).unwrap().collect();
        let sampler = UniformSampler::new(&sh).unwrap();
        let samples = sample_uniform_stream(&sampler, &SamplerConfig::new(17, 200_000)).unwrap();
        let chi = chi_square_uniform(&counts_over(&all, &samples)).unwrap();
        assert!(chi.p_value > 1e-3, "{s}: {chi:?}");
    }
}

#[test]
fn conditional_sampler_is_uniform_on_n0() {
    for s in ["2,2,2", "2,2,2,2", "3,3,2"] {
        let sh = shape(s);
        let m = MatchingProfile::canonical_perfect(&sh).unwrap().realize(&sh).unwrap();
        let n0: Vec<LabeledMatching> = enumerate_pm(&sh).unwrap().filter(|p| p.overlap(&m).unwrap() == 0).collect();
        let sampler = ConditionalSampler::new(&sh, &m, &LabeledMatching::empty(sh.total())).unwrap();
        let samples = sample_conditional_stream(&sampler, &SamplerConfig::new(23, 100_000)).unwrap();
        let chi = chi_square_uniform(&counts_over(&n0, &samples)).unwrap();
        assert!(chi.p_value > 1e-3, "{s}: {chi:?}");
    }
}

// Empirical and exact TV agree within 2/sqrt(N) + 1e-6 when the samples come
// from the exact distribution.
#[test]
fn empirical_tv_tracks_exact_tv() {
    let lambda = BigRational::new(BigInt::from(3), BigInt::from(4));
    for s in ["2,2,2", "2,2,2,2", "3,3,2", "4,4"] {
        let sh = shape(s);
        let profile = MatchingProfile::canonical_perfect(&sh).unwrap();
        let m = profile.realize(&sh).unwrap();
        let table = exact::strata(&sh, &profile).unwrap();
        let n = 40_000;
        let sampler = UniformSampler::new(&sh).unwrap();
        let xs: Vec<usize> = sample_uniform_stream(&sampler, &SamplerConfig::new(29, n))
            .unwrap()
            .iter()
            .map(|r| r.overlap(&m).unwrap())
            .collect();
        let exact_tv = tv_exact::<f64>(&table.strata, &lambda).unwrap().tv;
        let emp_tv = tv_empirical::<f64>(&xs, &lambda).unwrap().tv;
        assert!((exact_tv - emp_tv).abs() <= 2.0 / (n as f64).sqrt() + 1e-6, "{s}: {exact_tv} vs {emp_tv}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn samples_are_valid_and_reproducible(parts in prop::collection::vec(1usize..=6, 2..=5), seed in any::<u64>()) {
        prop_assume!(parts.iter().sum::<usize>() % 2 == 0);
        let sh = MultipartiteShape::new(parts).unwrap();
        prop_assume!(exact::pm_total(&sh).unwrap() > 0u8.into());
        let sampler = UniformSampler::new(&sh).unwrap();
        let cfg = SamplerConfig::new(seed, 20);
        let a = sample_uniform_stream(&sampler, &cfg).unwrap();
        for r in &a {
            prop_assert!(r.is_perfect());
            prop_assert!(r.check_on_shape(&sh).is_ok());
        }
        prop_assert_eq!(a, sample_uniform_stream(&sampler, &cfg).unwrap());
    }
}
