//! Lattice points of the matching-type polytope and their exact weights.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::combinatorics::{double_factorial_odd, FactorialTable};
use crate::error::{Error, Result};
use crate::model::{pairs, EdgeCountVector, MultipartiteShape};

/// Whether a complete multipartite graph with these part sizes (zeros
/// allowed) has a perfect matching.
pub(crate) fn matchable(sizes: &[u64]) -> bool {
    let total: u64 = sizes.iter().sum();
    let max = sizes.iter().copied().max().unwrap_or(0);
    total.is_multiple_of(2) && 2 * max <= total
}

/// Depth-first walk over every `v` satisfying `v_{i,j} ≥ 0` and
/// `Σ_{j≠i} v_{i,j} = sizes[i]`.
///
/// Variables are assigned in lexicographic pair order with ascending
/// values, so points are visited in lexicographic order. Each row's last
/// variable is forced, and after a row closes the remaining parts must still
/// admit a perfect matching, so the walk never enters a dead subtree.
pub(crate) struct LatticeWalk<'a> {
    sizes: &'a [u64],
    pair_list: Vec<(usize, usize)>,
}

impl<'a> LatticeWalk<'a> {
    pub(crate) fn new(sizes: &'a [u64]) -> Self {
        Self { sizes, pair_list: pairs(sizes.len()).collect() }
    }

    /// Visits every point. Returns early when the shape has none.
    pub(crate) fn for_each(&self, mut visit: impl FnMut(&[u64])) {
        self.try_for_each(|v| {
            visit(v);
            true
        });
    }

    /// Like `for_each`, stopping as soon as `visit` returns `false`.
    pub(crate) fn try_for_each(&self, mut visit: impl FnMut(&[u64]) -> bool) {
        if !matchable(self.sizes) {
            return;
        }
        let mut rem = self.sizes.to_vec();
        let mut cur = vec![0u64; self.pair_list.len()];
        self.rec(0, &mut rem, &mut cur, &mut visit);
    }

    /// Admissible values of the first variable; each value roots an
    /// independent subtree.
    pub(crate) fn first_values(&self) -> Vec<u64> {
        if !matchable(self.sizes) || self.pair_list.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut rem = self.sizes.to_vec();
        self.first_level(&mut rem, &mut |v| out.push(v));
        out
    }

    /// Visits the points whose first variable equals `first`.
    pub(crate) fn for_each_with_first(&self, first: u64, mut visit: impl FnMut(&[u64])) {
        let mut rem = self.sizes.to_vec();
        let mut cur = vec![0u64; self.pair_list.len()];
        let (i, j) = self.pair_list[0];
        if first > rem[i] || first > rem[j] {
            return;
        }
        rem[i] -= first;
        rem[j] -= first;
        cur[0] = first;
        if j == self.sizes.len() - 1 && (rem[i] != 0 || !matchable(&rem[i + 1..])) {
            return;
        }
        self.rec(1, &mut rem, &mut cur, &mut |v: &[u64]| {
            visit(v);
            true
        });
    }

    fn bounds(&self, idx: usize, rem: &[u64]) -> Option<(u64, u64)> {
        let (i, j) = self.pair_list[idx];
        let r = self.sizes.len();
        if j == r - 1 {
            let v = rem[i];
            return (v <= rem[j]).then_some((v, v));
        }
        let later: u64 = rem[j + 1..].iter().sum();
        let lo = rem[i].saturating_sub(later);
        let hi = rem[i].min(rem[j]);
        (lo <= hi).then_some((lo, hi))
    }

    // Returns false once the visitor asks to stop.
    fn rec(&self, idx: usize, rem: &mut [u64], cur: &mut [u64], visit: &mut impl FnMut(&[u64]) -> bool) -> bool {
        if idx == self.pair_list.len() {
            return visit(cur);
        }
        let (i, j) = self.pair_list[idx];
        let row_closes = j == self.sizes.len() - 1;
        let Some((lo, hi)) = self.bounds(idx, rem) else { return true };
        for v in lo..=hi {
            cur[idx] = v;
            rem[i] -= v;
            rem[j] -= v;
            let go_on = if !row_closes || matchable(&rem[i + 1..]) { self.rec(idx + 1, rem, cur, visit) } else { true };
            rem[i] += v;
            rem[j] += v;
            if !go_on {
                return false;
            }
        }
        cur[idx] = 0;
        true
    }

    fn first_level(&self, rem: &mut [u64], out: &mut impl FnMut(u64)) {
        let (i, j) = self.pair_list[0];
        let row_closes = j == self.sizes.len() - 1;
        let Some((lo, hi)) = self.bounds(0, rem) else { return };
        for v in lo..=hi {
            rem[i] -= v;
            rem[j] -= v;
            if !row_closes || matchable(&rem[i + 1..]) {
                out(v);
            }
            rem[i] += v;
            rem[j] += v;
        }
    }
}

/// `Π_i v_i! / Π_{i<j} v_{i,j}!` given the numerator `Π_i v_i!`.
fn weight_with_numerator(numerator: &BigUint, v: &[u64], fact: &FactorialTable) -> BigUint {
    let mut den = BigUint::one();
    for &x in v {
        if x > 1 {
            den *= fact.get(x as usize);
        }
    }
    numerator / den
}

fn numerator(sizes: &[u64], fact: &FactorialTable) -> BigUint {
    sizes.iter().fold(BigUint::one(), |acc, &s| acc * fact.get(s as usize))
}

/// Number of perfect matchings with inter-part edge counts `v`:
/// `Π_i multinomial(v_i; v_{i,1},…,v_{i,r}) · Π_{i<j} v_{i,j}!`.
pub fn weight(shape: &MultipartiteShape, v: &EdgeCountVector) -> Result<BigUint> {
    v.check_pm(shape)?;
    let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
    let fact = FactorialTable::new(shape.parts().iter().copied().max().unwrap_or(0));
    Ok(weight_with_numerator(&numerator(&sizes, &fact), v.as_slice(), &fact))
}

/// Every lattice point of the row-sum system, in lexicographic order of
/// the `(i, j)`-sorted entries. Materializes the whole list.
pub fn enumerate_vectors(shape: &MultipartiteShape) -> Result<Vec<EdgeCountVector>> {
    shape.require_even()?;
    let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
    let r = shape.r();
    let mut out = Vec::new();
    LatticeWalk::new(&sizes).for_each(|v| {
        out.push(EdgeCountVector::new(r, v.to_vec()).expect("walk emits full vectors"));
    });
    Ok(out)
}

/// Every lattice point with its weight, in walk order. Fails with
/// [`Error::Intractable`] past `cap` points.
pub fn weighted_vectors(shape: &MultipartiteShape, cap: usize) -> Result<Vec<(EdgeCountVector, BigUint)>> {
    shape.require_even()?;
    let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
    let fact = FactorialTable::new(factorial_bound(&sizes));
    let num = numerator(&sizes, &fact);
    let r = shape.r();
    let mut out = Vec::new();
    let mut overflow = false;
    LatticeWalk::new(&sizes).try_for_each(|v| {
        if out.len() == cap {
            overflow = true;
            return false;
        }
        let w = weight_with_numerator(&num, v, &fact);
        out.push((EdgeCountVector::new(r, v.to_vec()).expect("walk emits full vectors"), w));
        true
    });
    if overflow {
        return Err(Error::Intractable(format!("shape {shape} has more than {cap} edge-count vectors")));
    }
    Ok(out)
}

/// Visits every lattice point without materializing the list.
pub fn for_each_vector(shape: &MultipartiteShape, mut visit: impl FnMut(&[u64])) -> Result<()> {
    shape.require_even()?;
    let sizes: Vec<u64> = shape.parts().iter().map(|&p| p as u64).collect();
    LatticeWalk::new(&sizes).for_each(|v| visit(v));
    Ok(())
}

/// `pm` of the complete multipartite graph with these part sizes (zeros
/// allowed, any order) by summing weights over every lattice point.
/// Subtrees rooted at the first variable are summed in parallel.
pub(crate) fn pm_generic(sizes: &[u64], fact: &FactorialTable) -> BigUint {
    let sizes: Vec<u64> = sizes.iter().copied().filter(|&s| s > 0).collect();
    if sizes.is_empty() {
        return BigUint::one();
    }
    if !matchable(&sizes) || sizes.len() < 2 {
        return BigUint::zero();
    }
    let num = numerator(&sizes, fact);
    let walk = LatticeWalk::new(&sizes);
    walk.first_values()
        .into_par_iter()
        .map(|first| {
            let mut acc = BigUint::zero();
            walk.for_each_with_first(first, |v| acc += weight_with_numerator(&num, v, fact));
            acc
        })
        .reduce(BigUint::zero, |a, b| a + b)
}

/// `pm` using closed forms where they exist: two parts (`n!`), three parts
/// (the unique lattice point) and all parts of size one (`(2n−1)!!`).
pub(crate) fn pm_fast(sizes: &[u64], fact: &FactorialTable) -> BigUint {
    let mut s: Vec<u64> = sizes.iter().copied().filter(|&x| x > 0).collect();
    if s.is_empty() {
        return BigUint::one();
    }
    if !matchable(&s) {
        return BigUint::zero();
    }
    match s.len() {
        1 => BigUint::zero(),
        2 => fact.get(s[0] as usize).clone(),
        3 => {
            let (a, b, c) = (s[0], s[1], s[2]);
            // a + b − c etc. are even and nonnegative because matchable() holds
            let v = [(a + b - c) / 2, (a + c - b) / 2, (b + c - a) / 2];
            weight_with_numerator(&numerator(&s, fact), &v, fact)
        }
        k if s.iter().all(|&x| x == 1) => double_factorial_odd(k / 2),
        _ => {
            s.sort_unstable();
            pm_generic(&s, fact)
        }
    }
}

/// Largest factorial any weight over these sizes needs.
pub(crate) fn factorial_bound(sizes: &[u64]) -> usize {
    sizes.iter().copied().max().unwrap_or(0) as usize
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn shape(s: &str) -> MultipartiteShape {
        MultipartiteShape::parse(s).unwrap()
    }

    // bounded brute force over the box [0, max v_i]^{C(r,2)}
    fn box_points(shape: &MultipartiteShape) -> Vec<Vec<u64>> {
        let r = shape.r();
        let d = crate::model::pair_count(r);
        let max = *shape.parts().iter().max().unwrap() as u64;
        let mut out = Vec::new();
        let mut cur = vec![0u64; d];
        loop {
            let v = EdgeCountVector::new(r, cur.clone()).unwrap();
            if v.check_pm(shape).is_ok() {
                out.push(cur.clone());
            }
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < max {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    #[test]
    fn weight_examples() {
        let s = shape("4,4");
        assert_eq!(weight(&s, &EdgeCountVector::new(2, vec![4]).unwrap()).unwrap(), BigUint::from(24u32));
        let s = shape("2,2,2");
        assert_eq!(weight(&s, &EdgeCountVector::new(3, vec![1, 1, 1]).unwrap()).unwrap(), BigUint::from(8u32));
        let s = shape("2,1,1");
        assert_eq!(weight(&s, &EdgeCountVector::new(3, vec![1, 1, 0]).unwrap()).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn weight_rejects_infeasible_vectors() {
        let s = shape("2,2,2");
        let err = weight(&s, &EdgeCountVector::new(3, vec![2, 0, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, crate::Error::RowConstraint { part: 1, .. }));
    }

    #[test]
    fn enumerate_examples() {
        let v = enumerate_vectors(&shape("2,2,2")).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].as_slice(), &[1, 1, 1]);

        let v = enumerate_vectors(&shape("1,1,1,1")).unwrap();
        let got: Vec<Vec<u64>> = v.iter().map(|x| x.as_slice().to_vec()).collect();
        // pairs: 01 02 03 12 13 23
        assert_eq!(
            got,
            vec![vec![0, 0, 1, 1, 0, 0], vec![0, 1, 0, 0, 1, 0], vec![1, 0, 0, 0, 0, 1]]
        );

        let v = enumerate_vectors(&shape("7,7")).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].as_slice(), &[7]);

        assert!(enumerate_vectors(&shape("3,3,3")).is_err());
        assert!(enumerate_vectors(&shape("3,1")).unwrap().is_empty());
    }

    #[test]
    fn walk_matches_box_brute_force() {
        for s in ["2,2,2", "1,1,1,1", "3,2,2,1", "2,2,2,2", "4,3,2,1", "3,3,2,2,2", "1,1,1,1,2"] {
            let sh = shape(s);
            let walk: Vec<Vec<u64>> =
                enumerate_vectors(&sh).unwrap().iter().map(|v| v.as_slice().to_vec()).collect();
            let mut brute = box_points(&sh);
            brute.sort();
            assert_eq!(walk, brute, "shape {s}");
        }
    }

    #[test]
    fn pm_examples() {
        let f = FactorialTable::new(10);
        assert_eq!(pm_fast(&[4, 4], &f), BigUint::from(24u32));
        assert_eq!(pm_fast(&[2, 2, 2], &f), BigUint::from(8u32));
        assert_eq!(pm_fast(&[1, 1, 1, 1], &f), BigUint::from(3u32));
        assert_eq!(pm_generic(&[1, 1, 1, 1], &f), BigUint::from(3u32));
        assert_eq!(pm_fast(&[3, 1], &f), BigUint::zero());
        assert_eq!(pm_fast(&[0, 0], &f), BigUint::one());
    }

    #[test]
    fn pm_agrees_with_oracle_on_small_shapes() {
        let f = FactorialTable::new(10);
        for s in ["2,2,2", "3,2,1", "2,2,1,1", "1,1,1,1,1,1", "4,2,2", "3,3,2", "2,2,2,2", "5,3", "3,3,3,1"] {
            let sh = shape(s);
            let sizes: Vec<u64> = sh.parts().iter().map(|&p| p as u64).collect();
            let brute = oracle::count_pm(&sh).unwrap();
            assert_eq!(pm_fast(&sizes, &f), brute, "fast {s}");
            assert_eq!(pm_generic(&sizes, &f), brute, "generic {s}");
        }
    }
}
