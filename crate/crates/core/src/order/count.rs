use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Integers in `[1, n]` divisible by none of `primes`, by inclusion–exclusion.
pub fn count_coprime(n: u64, primes: &[u64]) -> u64 {
    fn go(n: u64, primes: &[u64], product: u64, sign: i64, acc: &mut i64) {
        for (i, &p) in primes.iter().enumerate() {
            // products above n contribute ⌊n / d⌋ = 0, as do all their multiples
            let Some(d) = product.checked_mul(p).filter(|&d| d <= n) else {
                continue;
            };
            *acc -= sign * (n / d) as i64;
            go(n, &primes[i + 1..], d, -sign, acc);
        }
    }
    let mut acc = n as i64;
    go(n, primes, 1, 1, &mut acc);
    acc as u64
}

/// `n · ∏ (1 − 1/p)`, exact.
pub fn totient_formula(n: u64, primes: &[u64]) -> BigRational {
    primes.iter().fold(BigRational::from_integer(BigInt::from(n)), |acc, &p| {
        acc * (BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64, primes: &[u64]) -> u64 {
        (1..=n).filter(|m| primes.iter().all(|p| m % p != 0)).count() as u64
    }

    #[test]
    fn examples() {
        assert_eq!(count_coprime(30, &[2, 3, 5]), 8);
        assert_eq!(totient_formula(30, &[2, 3, 5]), BigRational::from_integer(8.into()));
        assert_eq!(count_coprime(10, &[]), 10);
        assert_eq!(count_coprime(7, &[2]), 4);
        assert_eq!(
            totient_formula(7, &[2]),
            BigRational::new(7.into(), 2.into())
        );
    }

    #[test]
    fn matches_enumeration() {
        let sets: [&[u64]; 5] = [&[2], &[3, 7], &[2, 3, 5], &[2, 5, 11, 13], &[97, 101]];
        for n in 1..=300 {
            for p in sets {
                assert_eq!(count_coprime(n, p), brute(n, p), "n={n} p={p:?}");
            }
        }
    }
}
