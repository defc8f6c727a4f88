//! Miller-Rabin primality testing.
//!
//! Machine-word inputs use a witness set that is deterministic for all u64;
//! wider inputs fall back to a fixed battery of small prime bases. That is
//! not a primality proof, but certificate soundness never rests on primality
//! alone: every certificate is re-verified and audited against brute force.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::natural::Natural;

/// Deterministic for every u64 input (standard 7-witness set).
const U64_WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Bases used for inputs wider than u64.
const WIDE_BASES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn sprp_u64(n: u64, base: u64) -> bool {
    // n odd, n > 2 here
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    U64_WITNESSES
        .iter()
        .all(|&a| a % n == 0 || sprp_u64(n, a % n))
}

fn sprp_big(n: &Natural, base: &Natural) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test for arbitrary-precision naturals.
pub fn is_prime(n: &Natural) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    for &p in WIDE_BASES.iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    WIDE_BASES
        .iter()
        .all(|&b| sprp_big(n, &BigUint::from(b)))
}

/// Primes below `SMALL_PRIME_LIMIT`, sieved once and shared. These drive
/// trial division on wide inputs.
pub const SMALL_PRIME_LIMIT: u64 = 1 << 16;

pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for i in 2..limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Ascending iterator over all primes (2, 3, 5, 7, 11, ...).
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natural::nat;

    #[test]
    fn small_cases() {
        let known = [2u64, 3, 5, 7, 11, 13, 8191];
        for p in known {
            assert!(is_prime_u64(p), "{p} is prime");
        }
        for c in [0u64, 1, 4, 2047, 3277, 1_000_000] {
            assert!(!is_prime_u64(c), "{c} is composite");
        }
    }

    #[test]
    fn agrees_with_trial_division_below_10k() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), naive(n), "mismatch at {n}");
        }
    }

    #[test]
    fn mersenne_exponent_scan() {
        // 2^p - 1 is prime exactly for these p below 140
        let mersenne = [2u32, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127];
        for p in 2u32..140 {
            let m = (Natural::one() << p) - 1u32;
            assert_eq!(
                is_prime(&m),
                mersenne.contains(&p),
                "2^{p}-1 primality wrong"
            );
        }
    }

    #[test]
    fn small_prime_table_is_sane() {
        let primes = small_primes();
        assert_eq!(primes[0], 2);
        assert_eq!(primes[24], 97);
        assert!(primes.iter().all(|&p| is_prime_u64(p as u64)));
    }

    #[test]
    fn prime_iterator_starts_correctly() {
        let first: Vec<u64> = primes().take(6).collect();
        assert_eq!(first, vec![2, 3, 5, 7, 11, 13]);
        let _ = nat(1);
    }
}
