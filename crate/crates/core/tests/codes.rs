use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use ordtope::codes::{
    derive_constants, g_decode, g_encode, iterate_decode, iterate_encode, l_encode, CodeValue,
    EncodingSpec, Payload,
};
use ordtope::numeric::{gen_primes, required_digits, FixedLog, PrimeBasis, PrimeSequence};
use proptest::prelude::*;

fn basis(m: usize) -> Arc<PrimeBasis> {
    Arc::new(gen_primes(m, PrimeSequence::First, 6).unwrap())
}

fn exponents(mut index: u64, n: usize, k: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let a = (index % (k as u64 + 1)) as u32;
            index /= k as u64 + 1;
            a
        })
        .collect()
}

#[test]
fn round_trip_and_injective_exhaustive() {
    let b = basis(8);
    for (n, k) in [(8, 3), (6, 2), (3, 1)] {
        let size = (k as u64 + 1).pow(n as u32);
        let mut seen = HashSet::with_capacity(size as usize);
        for i in 0..size {
            let a = exponents(i, n, k);
            let g = g_encode(&a, &b).unwrap();
            assert_eq!(g_decode(&g).unwrap(), a);
            assert!(seen.insert(g.value().clone()));
        }
    }
}

#[test]
fn lcode_order_matches_gcode_order() {
    let n = 10;
    let b = basis(n);
    let d = required_digits(&b, n, 1).unwrap();
    let mut by_g: Vec<(BigUint, u64)> = Vec::new();
    let mut by_l: Vec<(FixedLog, u64)> = Vec::new();
    for i in 0..1u64 << n {
        let a = exponents(i, n, 1);
        by_g.push((g_encode(&a, &b).unwrap().value().clone(), i));
        by_l.push((l_encode(&a, &b, d).unwrap().sum().clone(), i));
    }
    by_g.sort();
    by_l.sort();
    let pg: Vec<u64> = by_g.iter().map(|x| x.1).collect();
    let pl: Vec<u64> = by_l.iter().map(|x| x.1).collect();
    assert_eq!(pg, pl);
}

#[test]
fn subset_sums_grow_with_the_subset() {
    let m = 16;
    let b = basis(m);
    let logs = b.logs();
    for set in 0u32..1 << m {
        let sum = |s: u32| {
            (0..m)
                .filter(|i| s >> i & 1 == 1)
                .fold(FixedLog::zero(6), |acc, i| &acc + &logs[i])
        };
        let full = sum(set);
        for i in (0..m).filter(|i| set >> i & 1 == 1) {
            assert!(sum(set & !(1 << i)) < full);
        }
    }
}

#[test]
fn iterated_two_levels() {
    let spec = EncodingSpec::Compose {
        inner: Box::new(EncodingSpec::leaf(basis(3), 3, 4)),
        outer: basis(8),
        radix: 10,
    };
    let payload = Payload::Vector(vec![4, 0, 2]);
    let code = iterate_encode(&spec, &payload).unwrap();
    assert!(matches!(code, CodeValue::Single(_)));
    assert_eq!(iterate_decode(&spec, &code).unwrap(), payload);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn constants_strictly_increasing(raw in proptest::collection::vec(1i64..100_000, 1..64)) {
        let values: Vec<FixedLog> = raw.iter().map(|&m| FixedLog::new(m, 3).unwrap()).collect();
        let max_digits = values.iter().map(FixedLog::stored_digits).max().unwrap();
        let m = values.len();
        let c = derive_constants(&values, max_digits as u32 + 3).unwrap();
        prop_assert!(c.products.windows(2).all(|w| w[0] < w[1]));
        let one: FixedLog = "1".parse().unwrap();
        let eps = c.epsilon();
        let top = &one + &(&eps * m as u32);
        prop_assert!(c.products.iter().all(|p| p >= &one && p <= &top));
        prop_assert!(c.max_digits as f64 <= 4.0 * (max_digits as f64 + (m as f64).log2()));
    }

    #[test]
    fn round_trip_random(a in proptest::collection::vec(0u32..20, 1..12)) {
        let b = basis(12);
        let g = g_encode(&a, &b).unwrap();
        prop_assert_eq!(g_decode(&g).unwrap(), a);
    }
}
