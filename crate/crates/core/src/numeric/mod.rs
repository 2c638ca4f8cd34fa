//! Exact fixed-point logarithms and prime bases.
//!
//! Every code in the crate is built over a [`PrimeBasis`]: an increasing list
//! of primes with their base-10 logarithms truncated to `D` fractional digits
//! ([`FixedLog`]). Truncated logs are exact decimal values, so sums of them
//! compare exactly across platforms.

mod fixed;
mod log;
mod primes;

use std::cmp::Ordering;

use num_bigint::{BigUint, ToBigUint};
use thiserror::Error;

pub use fixed::FixedLog;
pub(crate) use fixed::{one_at, pow10};
pub use log::{log_floor, log_floor_u64};
pub use primes::{gen_primes, is_prime, PrimeBasis, PrimeSequence};

/// Default number of fractional digits for truncated logarithms.
pub const DEFAULT_DIGITS: u32 = 6;

/// Largest domain `(k+1)^n` that [`required_digits`] enumerates.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Digit counts above this are rejected as impractical.
pub const MAX_DIGITS: u32 = 4096;

/// Enumeration is carried out in `i128` mantissas up to this precision.
const ENUMERATION_MAX_DIGITS: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("empty prime basis")]
    EmptyBasis,
    #[error("progression {start} + t·{step} has gcd(start, step) ≠ 1")]
    InvalidProgression { start: u64, step: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be strictly increasing")]
    NotIncreasing,
    #[error("logarithm of non-positive value {0}")]
    Domain(String),
    #[error("digit count must be at least 1")]
    ZeroDigits,
    #[error("cannot certify the truncated logarithm of {0}")]
    Undecidable(String),
    #[error("cannot parse decimal {0:?}")]
    Parse(String),
    #[error("basis has {available} primes, {needed} needed")]
    BasisTooShort { needed: usize, available: usize },
    #[error("exponent bound must be at least 1")]
    ZeroExponentBound,
    #[error("no precision up to {MAX_DIGITS} digits separates the codes")]
    PrecisionUndecidable,
    #[error("value does not fit the fixed-width accumulator")]
    Overflow,
}

/// Smallest digit count `D` at which the l-codes of `{0..k}^n` over the first
/// `n` primes of `basis` stay pairwise distinct and keep the order of the
/// exact logarithms.
///
/// Domains up to [`ENUMERATION_LIMIT`] are enumerated at increasing `D`.
/// Larger domains use the gap bound: two distinct g-codes below `G` differ in
/// `log₁₀` by more than `1/(5G)`, while truncating `n·k` logs loses less than
/// `n·k·10^(−D)`.
pub fn required_digits(basis: &PrimeBasis, n: usize, k: u32) -> Result<u32, NumericError> {
    if n > basis.len() {
        return Err(NumericError::BasisTooShort {
            needed: n,
            available: basis.len(),
        });
    }
    if k == 0 {
        return Err(NumericError::ZeroExponentBound);
    }
    if n == 0 {
        return Ok(1);
    }
    let primes = &basis.primes()[..n];
    let gap_digits = gap_bound_digits(primes, k);
    let size = (k as u64 + 1).checked_pow(n as u32);
    match size {
        Some(size) if size <= ENUMERATION_LIMIT => {
            let limit = gap_digits.min(ENUMERATION_MAX_DIGITS);
            for digits in 1..=limit {
                if separates(basis, n, k, digits)? {
                    return Ok(digits);
                }
            }
            if gap_digits <= MAX_DIGITS {
                Ok(gap_digits)
            } else {
                Err(NumericError::PrecisionUndecidable)
            }
        }
        _ if gap_digits <= MAX_DIGITS => Ok(gap_digits),
        _ => Err(NumericError::PrecisionUndecidable),
    }
}

fn gap_bound_digits(primes: &[u64], k: u32) -> u32 {
    // 10^D > 5·n·k·G  ⇒  n·k·10^(−D) < 1/(5G) < minimum gap
    let g = primes::max_gcode(primes, k);
    let bound = g * (primes.len() as u64 * k as u64 * 5).to_biguint().unwrap();
    bound.to_str_radix(10).len() as u32
}

/// Decodes a mixed-radix index into an exponent vector (least significant first).
pub(crate) fn index_to_exponents(mut index: u64, n: usize, k: u32) -> Vec<u32> {
    let radix = k as u64 + 1;
    (0..n)
        .map(|_| {
            let a = (index % radix) as u32;
            index /= radix;
            a
        })
        .collect()
}

/// Sums of `a·log` over all exponent vectors in mixed-radix index order.
pub(crate) fn enumerate_sums(logs: &[i128], k: u32) -> Vec<i128> {
    let mut sums = vec![0i128];
    for &l in logs {
        let prev = std::mem::take(&mut sums);
        sums.reserve(prev.len() * (k as usize + 1));
        // index = Σ a_i (k+1)^i: the new digit is the most significant so far
        for a in 0..=k as i128 {
            sums.extend(prev.iter().map(|s| s + a * l));
        }
    }
    sums
}

fn gcode_of(primes: &[u64], exps: &[u32]) -> BigUint {
    primes
        .iter()
        .zip(exps)
        .fold(BigUint::from(1u8), |acc, (&p, &a)| {
            acc * num_traits::pow(BigUint::from(p), a as usize)
        })
}

fn separates(basis: &PrimeBasis, n: usize, k: u32, digits: u32) -> Result<bool, NumericError> {
    let logs = basis.log_mantissas(n, digits)?;
    let sums = enumerate_sums(&logs, k);
    let mut order: Vec<u32> = (0..sums.len() as u32).collect();
    order.sort_unstable_by_key(|&i| sums[i as usize]);
    let primes = &basis.primes()[..n];
    for w in order.windows(2) {
        let (i, j) = (w[0] as u64, w[1] as u64);
        if sums[i as usize] == sums[j as usize] {
            return Ok(false);
        }
        let gi = gcode_of(primes, &index_to_exponents(i, n, k));
        let gj = gcode_of(primes, &index_to_exponents(j, n, k));
        if gi.cmp(&gj) != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}
