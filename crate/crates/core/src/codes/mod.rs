//! g-codes, l-codes, order-normalizing constants and iterated encodings.
//!
//! A g-code is the product `∏ p_i^{a_i}` of an exponent vector over a prime
//! basis; by unique factorization it is reversible. An l-code is the exact
//! fixed-point sum `Σ a_i ⌊log p_i⌋` and, at adequate precision, orders the
//! same way the g-codes do.

mod constants;
mod iterated;

use std::ops::Sub;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{required_digits, FixedLog, NumericError, PrimeBasis};

pub use constants::{derive_constants, Constants};
pub use iterated::{iterate_decode, iterate_encode, CodeValue, EncodingSpec, Payload};

/// Library-level bound on exponents and code lengths.
pub const MAX_EXPONENT: u32 = 64;
pub const MAX_LENGTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code of length {length} needs more primes than the basis has ({available})")]
    BasisTooSmall { length: usize, available: usize },
    #[error("exponent {0} exceeds the library bound {MAX_EXPONENT}")]
    ExponentTooLarge(u32),
    #[error("code length {0} exceeds the library bound {MAX_LENGTH}")]
    LengthTooLarge(usize),
    #[error("{residual} is left after dividing out the basis primes")]
    NotInFactorialDomain { residual: BigUint },
    #[error("zero is not a g-code")]
    ZeroCode,
    #[error("constants must be derived from positive values")]
    NonPositiveValue,
    #[error("no ε = 10^-e makes the scaled values strictly increasing at {digits} digits")]
    ConstantsInfeasible { digits: u32 },
    #[error("encoding spec mismatch: {0}")]
    Spec(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Exact product encoding of an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCode {
    value: BigUint,
    length: usize,
    basis: Arc<PrimeBasis>,
}

impl GCode {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    /// Wraps a raw value, for example one read back from storage.
    pub fn from_value(value: BigUint, length: usize, basis: Arc<PrimeBasis>) -> Self {
        Self {
            value,
            length,
            basis,
        }
    }
}

/// Precision fell below what the declared domain needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionWarning {
    pub digits: u32,
    pub required: u32,
}

/// Truncated-log sum encoding of an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCode {
    sum: FixedLog,
    exponents: Vec<u32>,
    basis: Arc<PrimeBasis>,
    warning: Option<PrecisionWarning>,
}

impl LCode {
    pub fn sum(&self) -> &FixedLog {
        &self.sum
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn warning(&self) -> Option<&PrecisionWarning> {
        self.warning.as_ref()
    }
}

fn check_shape(exponents: &[u32], basis: &PrimeBasis) -> Result<(), CodeError> {
    if exponents.len() > MAX_LENGTH {
        return Err(CodeError::LengthTooLarge(exponents.len()));
    }
    if exponents.len() > basis.len() {
        return Err(CodeError::BasisTooSmall {
            length: exponents.len(),
            available: basis.len(),
        });
    }
    if let Some(&a) = exponents.iter().find(|&&a| a > MAX_EXPONENT) {
        return Err(CodeError::ExponentTooLarge(a));
    }
    Ok(())
}

pub fn g_encode(exponents: &[u32], basis: &Arc<PrimeBasis>) -> Result<GCode, CodeError> {
    check_shape(exponents, basis)?;
    let value = basis
        .primes()
        .iter()
        .zip(exponents)
        .fold(BigUint::one(), |acc, (&p, &a)| {
            acc * num_traits::pow(BigUint::from(p), a as usize)
        });
    Ok(GCode {
        value,
        length: exponents.len(),
        basis: Arc::clone(basis),
    })
}

/// Trial division by the basis primes, in order.
pub fn g_decode(code: &GCode) -> Result<Vec<u32>, CodeError> {
    g_decode_value(&code.value, code.length, &code.basis)
}

pub fn g_decode_value(
    value: &BigUint,
    length: usize,
    basis: &PrimeBasis,
) -> Result<Vec<u32>, CodeError> {
    if value.is_zero() {
        return Err(CodeError::ZeroCode);
    }
    if length > basis.len() {
        return Err(CodeError::BasisTooSmall {
            length,
            available: basis.len(),
        });
    }
    let mut rest = value.clone();
    let mut exponents = Vec::with_capacity(length);
    for &p in &basis.primes()[..length] {
        let p = BigUint::from(p);
        let mut a = 0;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            a += 1;
        }
        exponents.push(a);
    }
    if !rest.is_one() {
        return Err(CodeError::NotInFactorialDomain { residual: rest });
    }
    Ok(exponents)
}

pub fn l_encode(
    exponents: &[u32],
    basis: &Arc<PrimeBasis>,
    digits: u32,
) -> Result<LCode, CodeError> {
    check_shape(exponents, basis)?;
    let logs = basis.logs_at(digits)?;
    let sum = logs
        .iter()
        .zip(exponents)
        .fold(FixedLog::zero(digits), |acc, (l, &a)| &acc + &(l * a));
    Ok(LCode {
        sum,
        exponents: exponents.to_vec(),
        basis: Arc::clone(basis),
        warning: None,
    })
}

/// [`l_encode`] that also checks `digits` against the precision the domain
/// `{0..max_exponent}^n` needs, attaching a warning when it falls short.
pub fn l_encode_declared(
    exponents: &[u32],
    basis: &Arc<PrimeBasis>,
    digits: u32,
    max_exponent: u32,
) -> Result<LCode, CodeError> {
    let mut code = l_encode(exponents, basis, digits)?;
    let required = required_digits(basis, exponents.len(), max_exponent.max(1))?;
    if digits < required {
        code.warning = Some(PrecisionWarning { digits, required });
    }
    Ok(code)
}

/// True iff every pair of values differs by more than `tolerance`.
pub fn check_factorial_domain<T>(values: &[T], tolerance: &T) -> bool
where
    T: Ord + Clone,
    for<'a> &'a T: Sub<&'a T, Output = T>,
{
    let mut sorted = values.to_vec();
    sorted.sort();
    sorted.windows(2).all(|w| &(&w[1] - &w[0]) > tolerance)
}
