use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{g_decode_value, g_encode, CodeError, MAX_EXPONENT};
use crate::numeric::PrimeBasis;

/// Tree of code parameters. Leaves are plain g-codes; `Compose` re-encodes
/// the digits of its inner code as exponents over another basis; `Union`
/// keeps a list of independent codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodingSpec {
    Leaf {
        basis: Arc<PrimeBasis>,
        length: usize,
        max_exponent: u32,
    },
    Union(Vec<EncodingSpec>),
    Compose {
        inner: Box<EncodingSpec>,
        outer: Arc<PrimeBasis>,
        /// Digit base for splitting the inner code; each digit becomes one
        /// exponent, so `radix − 1 ≤ MAX_EXPONENT`.
        radix: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Vector(Vec<u32>),
    List(Vec<Payload>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeValue {
    Single(BigUint),
    List(Vec<CodeValue>),
}

impl EncodingSpec {
    pub fn leaf(basis: Arc<PrimeBasis>, length: usize, max_exponent: u32) -> Self {
        Self::Leaf {
            basis,
            length,
            max_exponent,
        }
    }

    /// Longest chain of `Compose` nodes.
    pub fn iterations(&self) -> usize {
        match self {
            Self::Leaf { .. } => 0,
            Self::Union(children) => children.iter().map(Self::iterations).max().unwrap_or(0),
            Self::Compose { inner, .. } => 1 + inner.iterations(),
        }
    }

    /// Number of leaf codes.
    pub fn codes(&self) -> usize {
        match self {
            Self::Leaf { .. } => 1,
            Self::Union(children) => children.iter().map(Self::codes).sum(),
            Self::Compose { inner, .. } => inner.codes(),
        }
    }
}

fn spec_err(msg: impl Into<String>) -> CodeError {
    CodeError::Spec(msg.into())
}

fn check_radix(radix: u32) -> Result<(), CodeError> {
    if radix < 2 || radix - 1 > MAX_EXPONENT {
        return Err(spec_err(format!("radix {radix} outside 2..={}", MAX_EXPONENT + 1)));
    }
    Ok(())
}

fn digits_of(value: &BigUint, radix: u32) -> Vec<u32> {
    let r = BigUint::from(radix);
    let mut rest = value.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (q, d) = rest.div_rem(&r);
        out.push(d.to_u32().expect("digit below radix"));
        rest = q;
    }
    out
}

fn from_digits(digits: &[u32], radix: u32) -> BigUint {
    digits
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &d| acc * radix + d)
}

pub fn iterate_encode(spec: &EncodingSpec, payload: &Payload) -> Result<CodeValue, CodeError> {
    match (spec, payload) {
        (
            EncodingSpec::Leaf {
                basis,
                length,
                max_exponent,
            },
            Payload::Vector(a),
        ) => {
            if a.len() != *length {
                return Err(spec_err(format!(
                    "leaf expects {length} exponents, got {}",
                    a.len()
                )));
            }
            if let Some(&x) = a.iter().find(|&&x| x > *max_exponent) {
                return Err(spec_err(format!("exponent {x} above leaf bound {max_exponent}")));
            }
            Ok(CodeValue::Single(g_encode(a, basis)?.value().clone()))
        }
        (EncodingSpec::Union(children), Payload::List(items)) => {
            if children.len() != items.len() {
                return Err(spec_err(format!(
                    "union of {} codes given {} payloads",
                    children.len(),
                    items.len()
                )));
            }
            children
                .iter()
                .zip(items)
                .map(|(s, p)| iterate_encode(s, p))
                .collect::<Result<_, _>>()
                .map(CodeValue::List)
        }
        (
            EncodingSpec::Compose {
                inner,
                outer,
                radix,
            },
            _,
        ) => {
            check_radix(*radix)?;
            let CodeValue::Single(v) = iterate_encode(inner, payload)? else {
                return Err(spec_err("composition needs a single inner code"));
            };
            let digits = digits_of(&v, *radix);
            if digits.len() > outer.len() {
                return Err(spec_err(format!(
                    "inner code has {} radix-{radix} digits, outer basis {}",
                    digits.len(),
                    outer.len()
                )));
            }
            Ok(CodeValue::Single(g_encode(&digits, outer)?.value().clone()))
        }
        _ => Err(spec_err("payload shape does not match the encoding spec")),
    }
}

pub fn iterate_decode(spec: &EncodingSpec, code: &CodeValue) -> Result<Payload, CodeError> {
    match (spec, code) {
        (EncodingSpec::Leaf { basis, length, .. }, CodeValue::Single(v)) => {
            g_decode_value(v, *length, basis).map(Payload::Vector)
        }
        (EncodingSpec::Union(children), CodeValue::List(items)) => {
            if children.len() != items.len() {
                return Err(spec_err(format!(
                    "union of {} codes given {} values",
                    children.len(),
                    items.len()
                )));
            }
            children
                .iter()
                .zip(items)
                .map(|(s, c)| iterate_decode(s, c))
                .collect::<Result<_, _>>()
                .map(Payload::List)
        }
        (
            EncodingSpec::Compose {
                inner,
                outer,
                radix,
            },
            CodeValue::Single(v),
        ) => {
            check_radix(*radix)?;
            let digits = g_decode_value(v, outer.len(), outer)?;
            if let Some(&d) = digits.iter().find(|&&d| d >= *radix) {
                return Err(spec_err(format!("exponent {d} is not a radix-{radix} digit")));
            }
            iterate_decode(inner, &CodeValue::Single(from_digits(&digits, *radix)))
        }
        _ => Err(spec_err("code shape does not match the encoding spec")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{gen_primes, PrimeSequence};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis(m: usize) -> Arc<PrimeBasis> {
        Arc::new(gen_primes(m, PrimeSequence::First, 6).unwrap())
    }

    #[test]
    fn single_leaf_is_g_encode() {
        let b = basis(3);
        let spec = EncodingSpec::leaf(Arc::clone(&b), 3, 3);
        let got = iterate_encode(&spec, &Payload::Vector(vec![1, 2, 3])).unwrap();
        assert_eq!(got, CodeValue::Single(BigUint::from(2250u32)));
        assert_eq!(spec.iterations(), 0);
    }

    #[test]
    fn two_level_round_trip() {
        let inner = EncodingSpec::leaf(basis(4), 4, 3);
        // 2^3·3^3·5^3·7^3 = 9261000 < 16^6, six hex digits at most
        let spec = EncodingSpec::Compose {
            inner: Box::new(inner),
            outer: basis(6),
            radix: 16,
        };
        assert_eq!(spec.iterations(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a: Vec<u32> = (0..4).map(|_| rng.gen_range(0..=3)).collect();
            let payload = Payload::Vector(a);
            let code = iterate_encode(&spec, &payload).unwrap();
            assert_eq!(iterate_decode(&spec, &code).unwrap(), payload);
        }
    }

    #[test]
    fn union_concatenates() {
        let spec = EncodingSpec::Union(vec![
            EncodingSpec::leaf(basis(2), 2, 4),
            EncodingSpec::leaf(basis(3), 3, 4),
        ]);
        assert_eq!(spec.codes(), 2);
        let payload = Payload::List(vec![Payload::Vector(vec![1, 1]), Payload::Vector(vec![0, 0, 2])]);
        let code = iterate_encode(&spec, &payload).unwrap();
        assert_eq!(
            code,
            CodeValue::List(vec![
                CodeValue::Single(BigUint::from(6u32)),
                CodeValue::Single(BigUint::from(25u32)),
            ])
        );
        assert_eq!(iterate_decode(&spec, &code).unwrap(), payload);
    }

    #[test]
    fn shape_mismatch() {
        let spec = EncodingSpec::leaf(basis(3), 3, 3);
        assert!(matches!(
            iterate_encode(&spec, &Payload::Vector(vec![1, 2])),
            Err(CodeError::Spec(_))
        ));
        assert!(matches!(
            iterate_encode(&spec, &Payload::List(vec![])),
            Err(CodeError::Spec(_))
        ));
        let small = EncodingSpec::Compose {
            inner: Box::new(EncodingSpec::leaf(basis(3), 3, 3)),
            outer: basis(2),
            radix: 2,
        };
        assert!(matches!(
            iterate_encode(&small, &Payload::Vector(vec![3, 3, 3])),
            Err(CodeError::Spec(_))
        ));
    }
}
