use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `0!, 1!, …, max!`.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    f: Vec<BigUint>,
}

impl FactorialTable {
    pub fn new(max: usize) -> Self {
        let mut f = Vec::with_capacity(max + 1);
        f.push(BigUint::one());
        for k in 1..=max {
            let next = &f[k - 1] * BigUint::from(k);
            f.push(next);
        }
        Self { f }
    }

    pub fn max(&self) -> usize {
        self.f.len() - 1
    }

    #[inline]
    pub fn get(&self, k: usize) -> &BigUint {
        &self.f[k]
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    row.push(BigUint::one());
    for k in 1..=n {
        let next = &row[k - 1] * BigUint::from(n - k + 1) / BigUint::from(k);
        row.push(next);
    }
    row
}

/// `(2n − 1)!! = 1·3·5⋯(2n − 1)`, the number of perfect matchings of `K_{2n}`.
/// `(−1)!! = 1`.
pub fn double_factorial_odd(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(2 * k - 1))
}

/// `d_0, …, d_n` via `d_k = (k − 1)(d_{k−1} + d_{k−2})`.
pub fn derangement_table(n: usize) -> Vec<BigUint> {
    let mut d = Vec::with_capacity(n + 1);
    d.push(BigUint::one());
    if n >= 1 {
        d.push(BigUint::zero());
    }
    for k in 2..=n {
        let next = BigUint::from(k - 1) * (&d[k - 1] + &d[k - 2]);
        d.push(next);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial_row(4), [1u32, 4, 6, 4, 1].map(BigUint::from).to_vec());
        assert_eq!(double_factorial_odd(0), BigUint::one());
        assert_eq!(double_factorial_odd(3), BigUint::from(15u32));
        let t = FactorialTable::new(10);
        assert_eq!(t.get(10), &factorial(10));
    }

    #[test]
    fn derangements_match_permutation_count() {
        // brute force over all permutations of n ≤ 7 letters
        fn count(n: usize) -> u64 {
            fn rec(pos: usize, n: usize, used: &mut Vec<bool>) -> u64 {
                if pos == n {
                    return 1;
                }
                let mut c = 0;
                for v in 0..n {
                    if !used[v] && v != pos {
                        used[v] = true;
                        c += rec(pos + 1, n, used);
                        used[v] = false;
                    }
                }
                c
            }
            rec(0, n, &mut vec![false; n])
        }
        let d = derangement_table(7);
        for n in 0..=7 {
            assert_eq!(d[n], BigUint::from(count(n)), "n = {n}");
        }
        assert_eq!(d[4], BigUint::from(9u32));
    }
}
