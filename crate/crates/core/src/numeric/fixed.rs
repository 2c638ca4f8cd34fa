use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericError;

/// Decimal fixed-point number `mantissa × 10^(−digits)`.
///
/// Arithmetic on values with equal `digits` is exact integer arithmetic.
/// Mixed-precision operands are rescaled up to the larger digit count first,
/// which is also exact. Comparison is by value, so `1.0` equals `1.00`.
#[derive(Clone, Debug)]
pub struct FixedLog {
    mantissa: BigInt,
    digits: u32,
}

pub(crate) fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), exp as usize)
}

impl FixedLog {
    pub fn new(mantissa: impl Into<BigInt>, digits: u32) -> Result<Self, NumericError> {
        if digits == 0 {
            return Err(NumericError::ZeroDigits);
        }
        Ok(Self {
            mantissa: mantissa.into(),
            digits,
        })
    }

    pub fn zero(digits: u32) -> Self {
        Self {
            mantissa: BigInt::zero(),
            digits: digits.max(1),
        }
    }

    pub fn from_i128(mantissa: i128, digits: u32) -> Self {
        Self {
            mantissa: BigInt::from(mantissa),
            digits: digits.max(1),
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    /// Number of decimal digits stored in the mantissa (at least one).
    pub fn stored_digits(&self) -> usize {
        if self.mantissa.is_zero() {
            1
        } else {
            self.mantissa.magnitude().to_str_radix(10).len()
        }
    }

    /// Same value carried at `digits` fractional digits, if no digit is lost.
    pub fn rescaled(&self, digits: u32) -> Option<Self> {
        match digits.cmp(&self.digits) {
            Ordering::Equal => Some(self.clone()),
            Ordering::Greater => Some(Self {
                mantissa: &self.mantissa * pow10(digits - self.digits),
                digits,
            }),
            Ordering::Less => {
                let (q, r) = self.mantissa.div_rem(&pow10(self.digits - digits));
                r.is_zero().then_some(Self { mantissa: q, digits })
            }
        }
    }

    /// Truncation toward zero at `digits` fractional digits.
    pub fn truncated(&self, digits: u32) -> Self {
        if digits >= self.digits {
            return self.rescaled(digits).expect("upscaling is exact");
        }
        Self {
            mantissa: &self.mantissa / pow10(self.digits - digits),
            digits,
        }
    }

    /// Smallest mantissa `m` such that `m × 10^(−digits) ≥ self`.
    pub fn ceil_mantissa(&self, digits: u32) -> BigInt {
        if digits >= self.digits {
            return &self.mantissa * pow10(digits - self.digits);
        }
        self.mantissa.div_ceil(&pow10(self.digits - digits))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.digits))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_i128_mantissa(&self) -> Option<i128> {
        self.mantissa.to_i128()
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let d = self.digits.max(other.digits);
        let a = &self.mantissa * pow10(d - self.digits);
        let b = &other.mantissa * pow10(d - other.digits);
        (a, b, d)
    }
}

impl PartialEq for FixedLog {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FixedLog {}

impl PartialOrd for FixedLog {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FixedLog {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.digits == other.digits {
            return self.mantissa.cmp(&other.mantissa);
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for &FixedLog {
    type Output = FixedLog;

    fn add(self, rhs: &FixedLog) -> FixedLog {
        let (a, b, digits) = self.aligned(rhs);
        FixedLog {
            mantissa: a + b,
            digits,
        }
    }
}

impl Add for FixedLog {
    type Output = FixedLog;

    fn add(self, rhs: FixedLog) -> FixedLog {
        &self + &rhs
    }
}

impl Sub for &FixedLog {
    type Output = FixedLog;

    fn sub(self, rhs: &FixedLog) -> FixedLog {
        let (a, b, digits) = self.aligned(rhs);
        FixedLog {
            mantissa: a - b,
            digits,
        }
    }
}

impl Sub for FixedLog {
    type Output = FixedLog;

    fn sub(self, rhs: FixedLog) -> FixedLog {
        &self - &rhs
    }
}

/// Exact product; the result carries `self.digits + rhs.digits` digits.
impl Mul for &FixedLog {
    type Output = FixedLog;

    fn mul(self, rhs: &FixedLog) -> FixedLog {
        FixedLog {
            mantissa: &self.mantissa * &rhs.mantissa,
            digits: self.digits + rhs.digits,
        }
    }
}

impl Mul<u32> for &FixedLog {
    type Output = FixedLog;

    fn mul(self, rhs: u32) -> FixedLog {
        FixedLog {
            mantissa: &self.mantissa * rhs,
            digits: self.digits,
        }
    }
}

impl fmt::Display for FixedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = pow10(self.digits);
        let (int, frac) = self.mantissa.magnitude().div_rem(scale.magnitude());
        let sign = if self.mantissa.sign() == Sign::Minus { "-" } else { "" };
        write!(
            f,
            "{sign}{int}.{frac:0>width$}",
            frac = frac.to_str_radix(10),
            width = self.digits as usize
        )
    }
}

impl FromStr for FixedLog {
    type Err = NumericError;

    /// Parses plain decimal notation such as `0.778150`, `-1.5` or `3`.
    /// An integer literal is read with one fractional digit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericError::Parse(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, "0"));
        let frac = if frac.is_empty() { "0" } else { frac };
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let joined = format!("{int}{frac}");
        let mut mantissa = BigInt::from_str(&joined).map_err(|_| bad())?;
        if neg {
            mantissa = -mantissa;
        }
        Ok(Self {
            mantissa,
            digits: frac.len() as u32,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FixedLogRepr {
    mantissa: String,
    digits: u32,
}

impl Serialize for FixedLog {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FixedLogRepr {
            mantissa: self.mantissa.to_str_radix(10),
            digits: self.digits,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FixedLog {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FixedLogRepr::deserialize(deserializer)?;
        let mantissa = BigInt::from_str(&repr.mantissa).map_err(serde::de::Error::custom)?;
        FixedLog::new(mantissa, repr.digits).map_err(serde::de::Error::custom)
    }
}

impl std::iter::Sum for FixedLog {
    fn sum<I: Iterator<Item = FixedLog>>(iter: I) -> Self {
        iter.fold(FixedLog::zero(1), |acc, x| &acc + &x)
    }
}

pub(crate) fn one_at(digits: u32) -> FixedLog {
    FixedLog {
        mantissa: pow10(digits),
        digits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        let x: FixedLog = "0.778150".parse().unwrap();
        assert_eq!(x.mantissa(), &BigInt::from(778150));
        assert_eq!(x.digits(), 6);
        assert_eq!(x.to_string(), "0.778150");
        assert_eq!("-1.5".parse::<FixedLog>().unwrap().to_string(), "-1.5");
        assert_eq!("3".parse::<FixedLog>().unwrap().to_string(), "3.0");
        assert!("1.2.3".parse::<FixedLog>().is_err());
        assert!("abc".parse::<FixedLog>().is_err());
    }

    #[test]
    fn zero_digits_rejected() {
        assert!(FixedLog::new(5, 0).is_err());
    }

    #[test]
    fn value_equality_across_precision() {
        let a = FixedLog::new(10, 1).unwrap();
        let b = FixedLog::new(100, 2).unwrap();
        assert_eq!(a, b);
        assert!(FixedLog::new(101, 2).unwrap() > a);
    }

    #[test]
    fn rescale_and_truncate() {
        let x = FixedLog::new(301029, 6).unwrap();
        assert_eq!(x.rescaled(3), None);
        assert_eq!(x.truncated(3).mantissa(), &BigInt::from(301));
        assert_eq!(x.ceil_mantissa(3), BigInt::from(302));
        let neg = FixedLog::new(-301029, 6).unwrap();
        assert_eq!(neg.truncated(3).mantissa(), &BigInt::from(-301));
    }

    #[test]
    fn serde_round_trip() {
        let x = FixedLog::new(778150, 6).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"mantissa":"778150","digits":6}"#);
        let back: FixedLog = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    proptest! {
        #[test]
        fn addition_is_exact_assoc_comm(a in -10i64.pow(12)..10i64.pow(12),
                                        b in -10i64.pow(12)..10i64.pow(12),
                                        c in -10i64.pow(12)..10i64.pow(12),
                                        d1 in 1u32..9, d2 in 1u32..9) {
            let x = FixedLog::new(a, d1).unwrap();
            let y = FixedLog::new(b, d2).unwrap();
            let z = FixedLog::new(c, d1).unwrap();
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x + &y) - &y, x);
        }

        #[test]
        fn parse_display_round_trip(m in -10i64.pow(15)..10i64.pow(15), d in 1u32..12) {
            let x = FixedLog::new(m, d).unwrap();
            let back: FixedLog = x.to_string().parse().unwrap();
            prop_assert_eq!(back.mantissa(), x.mantissa());
            prop_assert_eq!(back.digits(), d);
        }
    }
}
