use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{ln_biguint, Scalar};

/// Two nonincreasing sequences with a common sum, and the derived
/// parameters of the factorial-ratio bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundInstance {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub t: usize,
    pub s: u64,
    /// `⌊S/t⌋`.
    pub c: u64,
    /// `max |x_i − c|`.
    pub k: u64,
    /// `⌊(y_1 − c)/2⌋`, the largest admissible choice.
    pub delta: u64,
}

impl BoundInstance {
    pub fn new(x: Vec<u64>, y: Vec<u64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidBoundInstance(m.into()));
        if x.is_empty() {
            return bad("sequences must be nonempty");
        }
        if x.len() != y.len() {
            return bad("x and y must have the same length");
        }
        if x.windows(2).any(|w| w[0] < w[1]) {
            return bad("x must be nonincreasing");
        }
        if y.windows(2).any(|w| w[0] < w[1]) {
            return bad("y must be nonincreasing");
        }
        let s: u64 = x.iter().sum();
        if y.iter().sum::<u64>() != s {
            return bad("x and y must have the same sum");
        }
        let t = x.len();
        let c = s / t as u64;
        let k = x.iter().map(|&xi| xi.abs_diff(c)).max().unwrap_or(0);
        if c <= k {
            return Err(Error::InvalidBoundInstance(format!("need c > k, got c = {c}, k = {k}")));
        }
        // y_1 is the largest entry, so y_1 ≥ S/t ≥ c
        let delta = (y[0] - c) / 2;
        Ok(Self { x, y, t, s, c, k, delta })
    }

    /// `−δ(δ−1)/(c+δ) + 2k²t/(c−k)`, exactly.
    pub fn exponent(&self) -> BigRational {
        let r = |n: u64, d: u64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let d = self.delta;
        r(2 * self.k * self.k * self.t as u64, self.c - self.k) - r(d * d.saturating_sub(1), self.c + d)
    }

    /// `Π x_i! / Π y_i!`, exactly.
    pub fn ratio(&self) -> BigRational {
        let prod = |v: &[u64]| {
            v.iter().fold(BigUint::one(), |acc, &z| acc * crate::exact::combinatorics::factorial(z as usize))
        };
        BigRational::new(prod(&self.x).into(), prod(&self.y).into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck<T: Scalar> {
    pub ratio: T,
    pub bound: T,
    /// `ln bound − ln ratio`.
    pub log_margin: f64,
    pub pass: bool,
}

/// Compares the exact factorial ratio with the bound. A zero exponent is
/// decided exactly (`ratio ≤ 1`); otherwise logs are compared with a `1e-9`
/// relative slack.
pub fn factorial_ratio_bound_check<T: Scalar>(inst: &BoundInstance) -> BoundCheck<T> {
    let ratio = inst.ratio();
    let exponent = inst.exponent();
    let ln_ratio = ln_biguint(ratio.numer().magnitude()) - ln_biguint(ratio.denom().magnitude());
    let e = exponent.to_f64().unwrap_or(f64::INFINITY);
    let pass = if exponent.is_zero() {
        ratio <= BigRational::one()
    } else {
        ln_ratio <= e + 1e-9 * e.abs().max(1.0)
    };
    BoundCheck {
        ratio: T::from_ratio(&ratio),
        bound: T::from_f64_lossy(e.exp()),
        log_margin: e - ln_ratio,
        pass,
    }
}

/// A random valid instance with `t ≤ max_t` and `S ≤ max_s`.
///
/// `x` starts balanced around `c` and takes random unit transfers that keep
/// every entry within `c ± k_target` for a random `k_target < c`; `y` is a
/// uniformly random composition of `S`. Both are sorted nonincreasing.
pub fn random_bound_instance<R: Rng + ?Sized>(rng: &mut R, max_t: usize, max_s: u64) -> BoundInstance {
    loop {
        let t = rng.random_range(1..=max_t);
        if (t as u64) > max_s {
            continue;
        }
        let s = rng.random_range(t as u64..=max_s);
        let c = s / t as u64;
        let k_target = rng.random_range(0..c);
        let mut x: Vec<u64> = (0..t).map(|i| c + u64::from((i as u64) < s % t as u64)).collect();
        for _ in 0..rng.random_range(0..=4 * t) {
            let (i, j) = (rng.random_range(0..t), rng.random_range(0..t));
            if i != j && x[i] > c.saturating_sub(k_target) && x[j] < c + k_target {
                x[i] -= 1;
                x[j] += 1;
            }
        }
        let mut cuts: Vec<u64> = (0..t - 1).map(|_| rng.random_range(0..=s)).collect();
        cuts.sort_unstable();
        let mut y: Vec<u64> = Vec::with_capacity(t);
        let mut prev = 0;
        for &cut in cuts.iter().chain(std::iter::once(&s)) {
            y.push(cut - prev);
            prev = cut;
        }
        x.sort_unstable_by(|a, b| b.cmp(a));
        y.sort_unstable_by(|a, b| b.cmp(a));
        if let Ok(inst) = BoundInstance::new(x, y) {
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let inst = BoundInstance::new(vec![3, 3], vec![5, 1]).unwrap();
        assert_eq!((inst.c, inst.k, inst.delta), (3, 0, 1));
        let chk = factorial_ratio_bound_check::<f64>(&inst);
        assert!((chk.ratio - 0.3).abs() < 1e-15);
        assert_eq!(chk.bound, 1.0);
        assert!(chk.pass);

        let same = BoundInstance::new(vec![4, 2], vec![4, 2]).unwrap();
        let chk = factorial_ratio_bound_check::<f64>(&same);
        assert_eq!(chk.ratio, 1.0);
        assert!(chk.pass);

        let inst = BoundInstance::new(vec![4, 4, 4], vec![6, 4, 2]).unwrap();
        assert_eq!(inst.ratio(), BigRational::new(13824.into(), 34560.into()));
        let chk = factorial_ratio_bound_check::<f32>(&inst);
        assert!((chk.ratio - 0.4).abs() < 1e-6);
        assert!(chk.pass);
    }

    #[test]
    fn invalid_instances_name_the_invariant() {
        let msg = |x: Vec<u64>, y: Vec<u64>| match BoundInstance::new(x, y) {
            Err(Error::InvalidBoundInstance(m)) => m,
            other => panic!("{other:?}"),
        };
        assert!(msg(vec![1, 3], vec![3, 1]).contains("x must be nonincreasing"));
        assert!(msg(vec![3, 1], vec![1, 3]).contains("y must be nonincreasing"));
        assert!(msg(vec![3, 1], vec![3, 2]).contains("same sum"));
        assert!(msg(vec![3], vec![2, 1]).contains("same length"));
        assert!(msg(vec![4, 0], vec![2, 2]).contains("c > k"));
    }

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let inst = random_bound_instance(&mut rng, 6, 400);
            assert!(inst.t <= 6 && inst.s <= 400 && inst.c > inst.k);
            assert_eq!(BoundInstance::new(inst.x.clone(), inst.y.clone()).unwrap(), inst);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn bound_holds(seed in any::<u64>()) {
            let inst = random_bound_instance(&mut ChaCha8Rng::seed_from_u64(seed), 6, 400);
            let chk = factorial_ratio_bound_check::<f64>(&inst);
            prop_assert!(chk.pass, "{:?} {:?}", inst, chk);
        }
    }
}
