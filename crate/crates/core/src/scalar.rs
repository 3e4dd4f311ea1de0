use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type used by the statistics layer.
///
/// Implemented for `f32` and `f64`. Exact values enter through
/// [`Scalar::from_ratio`] and [`Scalar::from_count`], which round once.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + serde::Serialize + Send + Sync + 'static
{
    fn from_ratio(r: &BigRational) -> Self;

    fn from_count(c: &BigUint) -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    /// Unit roundoff of the type.
    fn unit_roundoff() -> Self {
        Self::epsilon() / (Self::one() + Self::one())
    }
}

impl Scalar for f64 {
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn from_count(c: &BigUint) -> Self {
        c.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for f32 {
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r) as f32
    }

    fn from_count(c: &BigUint) -> Self {
        c.to_f32().unwrap_or(f32::INFINITY)
    }
}

// Scales numerator and denominator so that both fit in an f64 mantissa
// before dividing; huge counts would otherwise overflow to inf/inf.
fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() && (x != 0.0 || num_traits::Zero::is_zero(r.numer())) {
            return x;
        }
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let n = (num >> shift_n).to_f64().unwrap_or(0.0);
    let d = (den >> shift_d).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits() as i64;
    if bits <= 1000 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = (bits - 64) as usize;
    let top = (x >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn huge_ratio_converts() {
        let num = BigInt::from(3u8) * num_traits::pow(BigInt::from(10u8), 400);
        let den = BigInt::from(4u8) * num_traits::pow(BigInt::from(10u8), 400);
        let r = BigRational::new(num, den);
        assert!((f64::from_ratio(&r) - 0.75).abs() < 1e-15);
        assert!((f32::from_ratio(&r) - 0.75).abs() < 1e-7);
    }

    #[test]
    fn ln_of_large_integer() {
        let x = num_traits::pow(BigUint::from(10u8), 500);
        assert!((ln_biguint(&x) - 500.0 * 10f64.ln()).abs() < 1e-9);
    }
}
