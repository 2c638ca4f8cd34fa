//! Truncated base-10 logarithms with certified digits.
//!
//! `ln` is evaluated in binary fixed point with an explicit error bound
//! (in units of the last place), so every result is an interval. The
//! working precision is widened until both interval ends truncate to the
//! same decimal prefix.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fixed::{pow10, FixedLog};
use super::NumericError;

const GUARD_BITS: u64 = 64;
const MAX_WIDENINGS: u32 = 32;

/// Fixed-point value `v × 2^(−bits)` known to lie within `err` ulps.
#[derive(Clone, Debug)]
struct Approx {
    v: BigInt,
    err: BigInt,
}

/// `atanh(num/den)` for `0 ≤ num/den ≤ 1/3` at `bits` fractional bits.
fn atanh(num: &BigInt, den: &BigInt, bits: u64) -> Approx {
    if num.is_zero() {
        return Approx {
            v: BigInt::zero(),
            err: BigInt::zero(),
        };
    }
    let one = BigInt::one() << bits;
    let z = (num << bits) / den;
    let z2 = ((num * num) << bits) / (den * den);
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power = (&power * &z2) >> bits;
        k += 1;
        terms += 1;
    }
    // Each power carries at most `2k` ulps of accumulated truncation; each
    // term adds one more for the division. The tail is below one ulp because
    // z² ≤ 1/9.
    let t = BigInt::from(terms + 2);
    let err = &t * &t * 2u32 + 4u32;
    debug_assert!(sum < one);
    Approx { v: sum, err }
}

fn ln2(bits: u64) -> Approx {
    let a = atanh(&BigInt::one(), &BigInt::from(3u8), bits);
    Approx {
        v: a.v * 2u32,
        err: a.err * 2u32,
    }
}

fn ln10(bits: u64, ln2: &Approx) -> Approx {
    // 10 = 2^3 · 1.25 and ln 1.25 = 2·atanh(1/9)
    let a = atanh(&BigInt::one(), &BigInt::from(9u8), bits);
    Approx {
        v: &ln2.v * 3u32 + &a.v * 2u32,
        err: &ln2.err * 3u32 + &a.err * 2u32,
    }
}

/// `ln(num/den)` for positive integers.
fn ln_ratio(num: &BigUint, den: &BigUint, bits: u64, ln2: &Approx) -> Approx {
    // Choose e with num / (den·2^e) in [1, 2).
    let mut e = num.bits() as i64 - den.bits() as i64;
    let scaled = |e: i64| -> (BigInt, BigInt) {
        let (n, d) = (BigInt::from(num.clone()), BigInt::from(den.clone()));
        if e >= 0 {
            (n, d << e as usize)
        } else {
            (n << (-e) as usize, d)
        }
    };
    let (mut n, mut d) = scaled(e);
    if n < d {
        e -= 1;
        (n, d) = scaled(e);
    }
    debug_assert!(n >= d && n < &d * 2u32);
    // y = n/d in [1,2): ln y = 2 atanh((y−1)/(y+1)), argument in [0, 1/3)
    let a = atanh(&(&n - &d), &(&n + &d), bits);
    let e_big = BigInt::from(e);
    Approx {
        v: &ln2.v * &e_big + &a.v * 2u32,
        err: &ln2.err * e_big.abs() + &a.err * 2u32 + 1u32,
    }
}

/// Exponent `k` when `x = 10^k` exactly.
fn exact_power_of_ten(x: &BigRational) -> Option<i64> {
    let ten = BigInt::from(10u8);
    let power_of = |v: &BigInt| -> Option<i64> {
        let mut v = v.clone();
        let mut k = 0;
        while !v.is_one() {
            let (q, r) = v.div_rem(&ten);
            if !r.is_zero() {
                return None;
            }
            v = q;
            k += 1;
        }
        Some(k)
    };
    if x.denom().is_one() {
        power_of(x.numer())
    } else if x.numer().is_one() {
        power_of(x.denom()).map(|k| -k)
    } else {
        None
    }
}

/// Truncation toward zero of `num/den × 10^digits`.
fn scaled_trunc(num: &BigInt, den: &BigInt, digits: u32) -> BigInt {
    num * pow10(digits) / den
}

/// `⌊log₁₀ x⌋` truncated toward zero at `digits` fractional decimal digits.
///
/// The returned digits are exact: the internal interval is widened until
/// its truncations agree. Exact powers of ten are recognised directly.
pub fn log_floor(x: &BigRational, digits: u32) -> Result<FixedLog, NumericError> {
    if digits == 0 {
        return Err(NumericError::ZeroDigits);
    }
    if !x.is_positive() {
        return Err(NumericError::Domain(x.to_string()));
    }
    if let Some(k) = exact_power_of_ten(x) {
        return FixedLog::new(BigInt::from(k) * pow10(digits), digits);
    }
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    // log₂(10) < 3.33 bits per decimal digit, plus room for the integer part
    let mut bits = digits as u64 * 4 + GUARD_BITS + num.bits() / 2 + den.bits() / 2;
    for _ in 0..MAX_WIDENINGS {
        let l2 = ln2(bits);
        let l10 = ln10(bits, &l2);
        let lx = ln_ratio(&num, &den, bits, &l2);

        let lx_lo = &lx.v - &lx.err;
        let lx_hi = &lx.v + &lx.err;
        let l10_lo = &l10.v - &l10.err;
        let l10_hi = &l10.v + &l10.err;
        // log₁₀ x = ln x / ln 10 with ln 10 > 0 on the whole interval
        let lo = if lx_lo.is_negative() {
            scaled_trunc(&lx_lo, &l10_lo, digits)
        } else {
            scaled_trunc(&lx_lo, &l10_hi, digits)
        };
        let hi = if lx_hi.is_negative() {
            scaled_trunc(&lx_hi, &l10_hi, digits)
        } else {
            scaled_trunc(&lx_hi, &l10_lo, digits)
        };
        if lo == hi {
            return FixedLog::new(lo, digits);
        }
        bits *= 2;
    }
    Err(NumericError::Undecidable(x.to_string()))
}

/// `log_floor` for a natural number.
pub fn log_floor_u64(x: u64, digits: u32) -> Result<FixedLog, NumericError> {
    log_floor(&BigRational::from_integer(BigInt::from(x)), digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn log_of_two() {
        assert_eq!(log_floor_u64(2, 6).unwrap().to_string(), "0.301029");
        assert_eq!(
            log_floor_u64(2, 30).unwrap().to_string(),
            "0.301029995663981195213738894724"
        );
    }

    #[test]
    fn powers_of_ten_exact() {
        assert_eq!(log_floor_u64(10, 4).unwrap().to_string(), "1.0000");
        assert_eq!(log_floor_u64(1, 3).unwrap().to_string(), "0.000");
        assert_eq!(log_floor(&rat(1, 100), 2).unwrap().to_string(), "-2.00");
    }

    #[test]
    fn small_primes() {
        assert_eq!(log_floor_u64(3, 6).unwrap().to_string(), "0.477121");
        assert_eq!(log_floor_u64(5, 6).unwrap().to_string(), "0.698970");
        assert_eq!(log_floor_u64(7, 6).unwrap().to_string(), "0.845098");
    }

    #[test]
    fn below_one_truncates_toward_zero() {
        // log₁₀(1/2) = −0.30102999…
        assert_eq!(log_floor(&rat(1, 2), 3).unwrap().to_string(), "-0.301");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(log_floor(&rat(0, 1), 3), Err(NumericError::Domain(_))));
        assert!(matches!(log_floor(&rat(-2, 1), 3), Err(NumericError::Domain(_))));
        assert!(matches!(log_floor_u64(2, 0), Err(NumericError::ZeroDigits)));
    }

    proptest! {
        #[test]
        fn agrees_with_f64(x in 2u64..1_000_000_000, d in 1u32..9) {
            let got = log_floor_u64(x, d).unwrap().to_f64();
            let f = (x as f64).log10();
            prop_assert!(got <= f + 1e-12);
            prop_assert!(f - got < 10f64.powi(-(d as i32)) + 1e-12);
        }

        #[test]
        fn monotone(a in 1u64..100_000, b in 1u64..100_000, d in 1u32..8) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(log_floor_u64(lo, d).unwrap() <= log_floor_u64(hi, d).unwrap());
        }

        #[test]
        fn rationals_match_f64(n in 1i64..100_000, m in 1i64..100_000, d in 1u32..8) {
            let got = log_floor(&rat(n, m), d).unwrap().to_f64();
            let f = (n as f64 / m as f64).log10();
            prop_assert!((got - f).abs() < 10f64.powi(-(d as i32)) + 1e-12);
            // toward zero: |got| ≤ |f|
            prop_assert!(got.abs() <= f.abs() + 1e-12);
        }
    }
}
