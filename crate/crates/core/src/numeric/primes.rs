use std::borrow::Cow;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::fixed::FixedLog;
use super::log::log_floor_u64;
use super::NumericError;

/// How the primes of a basis are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeSequence {
    /// 2, 3, 5, 7, …
    First,
    /// Primes of the progression `a, a + d, a + 2d, …`.
    Progression { start: u64, step: u64 },
}

/// Strictly increasing primes together with their truncated logarithms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBasis {
    primes: Vec<u64>,
    logs: Vec<FixedLog>,
    digits: u32,
}

/// Deterministic primality for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    primal::is_prime(n)
}

impl PrimeBasis {
    pub fn new(primes: Vec<u64>, digits: u32) -> Result<Self, NumericError> {
        if primes.is_empty() {
            return Err(NumericError::EmptyBasis);
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(NumericError::NotPrime(p));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NumericError::NotIncreasing);
        }
        let logs = primes
            .iter()
            .map(|&p| log_floor_u64(p, digits))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            primes,
            logs,
            digits,
        })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn logs(&self) -> &[FixedLog] {
        &self.logs
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The same primes with logarithms recomputed at `digits`.
    pub fn with_digits(&self, digits: u32) -> Result<Self, NumericError> {
        Self::new(self.primes.clone(), digits)
    }

    /// Logarithms at `digits`, reusing the cached ones when they match.
    pub fn logs_at(&self, digits: u32) -> Result<Cow<'_, [FixedLog]>, NumericError> {
        if digits == self.digits {
            return Ok(Cow::Borrowed(&self.logs));
        }
        self.primes
            .iter()
            .map(|&p| log_floor_u64(p, digits))
            .collect::<Result<Vec<_>, _>>()
            .map(Cow::Owned)
    }

    /// Integer mantissas of the logarithms of the first `n` primes at `digits`.
    pub(crate) fn log_mantissas(&self, n: usize, digits: u32) -> Result<Vec<i128>, NumericError> {
        let logs = self.logs_at(digits)?;
        logs[..n]
            .iter()
            .map(|l| l.to_i128_mantissa().ok_or(NumericError::Overflow))
            .collect()
    }

    /// First `n` primes, or an error when the basis is shorter.
    pub fn prefix(&self, n: usize) -> Result<Self, NumericError> {
        if n > self.len() {
            return Err(NumericError::BasisTooShort {
                needed: n,
                available: self.len(),
            });
        }
        if n == 0 {
            return Err(NumericError::EmptyBasis);
        }
        Ok(Self {
            primes: self.primes[..n].to_vec(),
            logs: self.logs[..n].to_vec(),
            digits: self.digits,
        })
    }
}

/// Builds a basis of exactly `count` primes.
pub fn gen_primes(
    count: usize,
    sequence: PrimeSequence,
    digits: u32,
) -> Result<PrimeBasis, NumericError> {
    if count == 0 {
        return Err(NumericError::EmptyBasis);
    }
    let primes: Vec<u64> = match sequence {
        PrimeSequence::First => primal::Primes::all().take(count).map(|p| p as u64).collect(),
        PrimeSequence::Progression { start, step } => {
            if step == 0 || start.gcd(&step) != 1 {
                return Err(NumericError::InvalidProgression { start, step });
            }
            let mut out = Vec::with_capacity(count);
            let mut x = start;
            while out.len() < count {
                if is_prime(x) {
                    out.push(x);
                }
                x = x.checked_add(step).ok_or(NumericError::Overflow)?;
            }
            out
        }
    };
    PrimeBasis::new(primes, digits)
}

/// Upper bound on the largest g-code of the domain `{0..k}^n`.
pub(crate) fn max_gcode(primes: &[u64], k: u32) -> BigUint {
    primes
        .iter()
        .fold(BigUint::one(), |acc, &p| acc * num_traits::pow(BigUint::from(p), k as usize))
}
