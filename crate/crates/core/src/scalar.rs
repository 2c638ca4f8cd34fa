//! Numeric types the geometric modules are generic over.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field element: `f32`, `f64` or an exact rational.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Square root. Exact for rationals whose numerator and denominator are
    /// perfect squares; otherwise the nearest `f64` converted back.
    fn sqrt(&self) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f32 {
    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }
}

impl Scalar for f64 {
    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }
}

fn exact_isqrt(x: &BigInt) -> Option<BigInt> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

impl Scalar for BigRational {
    fn sqrt(&self) -> Self {
        if !self.is_negative() {
            if let (Some(n), Some(d)) = (exact_isqrt(self.numer()), exact_isqrt(self.denom())) {
                return BigRational::new(n, d);
            }
        }
        let f = self.to_f64().unwrap_or(f64::NAN).sqrt();
        BigRational::from_float(f).unwrap_or_else(|| BigRational::from_integer(0.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_exact() {
        let x = BigRational::new(25.into(), 4.into());
        assert_eq!(Scalar::sqrt(&x), BigRational::new(5.into(), 2.into()));
        let two = BigRational::from_integer(2.into());
        assert!((Scalar::sqrt(&two).to_f64_lossy() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn float_sqrt() {
        assert_eq!(Scalar::sqrt(&16f64), 4.0);
        assert_eq!(Scalar::sqrt(&9f32), 3.0);
    }
}
