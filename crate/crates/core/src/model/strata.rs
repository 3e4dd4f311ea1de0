use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{MatchingProfile, MultipartiteShape};

/// Exact stratum sizes `|N_0|, |N_1|, …`: the number of perfect matchings
/// sharing exactly `ℓ` edges with the deleted matching.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Strata(pub Vec<BigUint>);

impl Strata {
    pub fn from_u64(v: &[u64]) -> Self {
        Strata(v.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, l: usize) -> BigUint {
        self.0.get(l).cloned().unwrap_or_default()
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    /// `pm(G) = Σ_ℓ |N_ℓ|`.
    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }

    /// `Σ_ℓ ℓ·|N_ℓ|`.
    pub fn first_moment(&self) -> BigUint {
        self.0.iter().enumerate().map(|(l, n)| n * BigUint::from(l)).sum()
    }

    /// `Pr(X = ℓ)` for a uniform perfect matching, or `None` when the host
    /// has no perfect matching.
    pub fn probabilities(&self) -> Option<Vec<BigRational>> {
        let total = BigInt::from(self.total());
        if total.is_zero() {
            return None;
        }
        Some(self.0.iter().map(|n| BigRational::new(BigInt::from(n.clone()), total.clone())).collect())
    }

    /// `Pr(X = 0) = |N_0| / pm(G)`.
    pub fn p0(&self) -> Option<BigRational> {
        self.probabilities().map(|p| p[0].clone())
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.0.iter().map(|n| n.to_str_radix(10)).collect()
    }
}

impl std::fmt::Display for Strata {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.to_decimal_strings().join(","))
    }
}

impl Serialize for Strata {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Strata {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| {
                BigUint::parse_bytes(s.as_bytes(), 10)
                    .ok_or_else(|| serde::de::Error::custom(format!("not a decimal integer: {s:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Strata)
    }
}

/// Strata of one `(shape, profile)` instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumTable {
    pub shape: MultipartiteShape,
    pub profile: MatchingProfile,
    pub strata: Strata,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_uses_decimal_strings() {
        let t = StratumTable {
            shape: MultipartiteShape::parse("2,2,2").unwrap(),
            profile: MatchingProfile::parse("0:1:1,0:2:1,1:2:1").unwrap(),
            strata: Strata::from_u64(&[4, 3, 0, 1]),
        };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"shape":[2,2,2],"profile":[[0,1,1],[0,2,1],[1,2,1]],"strata":["4","3","0","1"]}"#
        );
        assert_eq!(serde_json::from_str::<StratumTable>(&s).unwrap(), t);
    }

    #[test]
    fn big_values_survive_round_trip() {
        let big = num_traits::pow(BigUint::from(10u8), 80) + BigUint::from(7u8);
        let s = Strata(vec![big.clone(), BigUint::zero()]);
        let back: Strata = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back.get(0), big);
        assert!(serde_json::from_str::<Strata>(r#"["1.5"]"#).is_err());
    }

    #[test]
    fn moments_and_probabilities() {
        let s = Strata::from_u64(&[4, 3, 0, 1]);
        assert_eq!(s.total(), BigUint::from(8u8));
        assert_eq!(s.first_moment(), BigUint::from(6u8));
        let p = s.probabilities().unwrap();
        assert_eq!(p[0], BigRational::new(1.into(), 2.into()));
        assert!(Strata::from_u64(&[0, 0]).probabilities().is_none());
    }
}
