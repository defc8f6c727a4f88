//! Property tests for the arithmetic identities the library is built on.
//! Expected values come from independent routes: Euclid's gcd, divisor
//! enumeration, and definitional cross-multiplication.

use abundancy_core::classify::checks::{prime_multiplier_ratio, surplus_bound_holds};
use abundancy_core::divisor::{abundancy, sigma_x};
use abundancy_core::factor::{
    divisors, factorize, gcd_fact, lcm_fact, xth_power_split, Factorization,
};
use abundancy_core::limits::{coprime_split, limit_general, limit_prime_product, LimitSpec};
use abundancy_core::natural::{nat, Natural};
use abundancy_core::oracle::{image_enumerate_with, search_witness_with, DivisorSieve};
use abundancy_core::rational::PositiveRational;
use num_integer::Integer;
use proptest::prelude::*;

fn f(n: u64) -> Factorization {
    factorize(&nat(n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn factorize_round_trips(n in 1u64..=1_000_000_000_000) {
        let fact = factorize(&nat(n)).unwrap();
        prop_assert_eq!(fact.value(), nat(n));
        for (p, e) in fact.factors() {
            prop_assert!(*e >= 1);
            prop_assert!(abundancy_core::primality::is_prime(p));
        }
    }

    #[test]
    fn gcd_lcm_match_euclid(a in 1u64..=1_000_000_000, b in 1u64..=1_000_000_000) {
        let (fa, fb) = (f(a), f(b));
        let g = gcd_fact(&fa, &fb).value();
        let l = lcm_fact(&fa, &fb).value();
        prop_assert_eq!(&g, &nat(a).gcd(&nat(b)));
        prop_assert_eq!(g * l, nat(a) * nat(b));
    }

    #[test]
    fn power_split_is_canonical(den in 1u64..=1_000_000_000, x in 1u32..=4) {
        let split = xth_power_split(&nat(den), x).unwrap();
        prop_assert_eq!(&split.c * split.b.pow(x), nat(den));
        // c keeps no x-th-power prime factor
        for (_, e) in factorize(&split.c).unwrap().factors() {
            prop_assert!(*e < x);
        }
    }

    #[test]
    fn divisor_list_is_complete_and_sorted(n in 1u64..=100_000) {
        let fact = f(n);
        let divs = divisors(&fact);
        prop_assert_eq!(nat(divs.len() as u64), fact.num_divisors());
        prop_assert!(divs.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(divs.iter().all(|d| (nat(n) % d) == nat(0)));
    }

    #[test]
    fn sigma_is_multiplicative(a in 2u64..=10_000, b in 2u64..=10_000, x in 1u32..=3) {
        prop_assume!(a.gcd(&b) == 1);
        let lhs = sigma_x(&f(a * b), x).unwrap();
        let rhs = sigma_x(&f(a), x).unwrap() * sigma_x(&f(b), x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn index_is_multiplicative(a in 2u64..=10_000, b in 2u64..=10_000, x in 1u32..=3) {
        prop_assume!(a.gcd(&b) == 1);
        let lhs = abundancy(x, &nat(a * b)).unwrap();
        let rhs = &abundancy(x, &nat(a)).unwrap() * &abundancy(x, &nat(b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_lcm_index_identity_random(a in 1u64..=200_000, b in 1u64..=200_000, x in 1u32..=3) {
        let g = a.gcd(&b);
        let l = a / g * b;
        let lhs = &abundancy(x, &nat(a)).unwrap() * &abundancy(x, &nat(b)).unwrap();
        let rhs = &abundancy(x, &nat(g)).unwrap() * &abundancy(x, &nat(l)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn index_grows_strictly_under_multiplication(
        n in 1u64..=100_000,
        k in 2u64..=1000,
        x in 1u32..=3,
    ) {
        let smaller = abundancy(x, &nat(n)).unwrap();
        let larger = abundancy(x, &nat(n * k)).unwrap();
        prop_assert!(larger > smaller);
    }

    #[test]
    fn rational_string_round_trip(n in 1u64..=u64::MAX, d in 1u64..=u64::MAX) {
        let q = PositiveRational::from_u64(n, d).unwrap();
        let parsed: PositiveRational = q.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &q);
        let parsed: PositiveRational = q.to_fraction_string().parse().unwrap();
        prop_assert_eq!(&parsed, &q);
    }

    #[test]
    fn rational_mul_div_inverse(a in 1u64..=1_000_000, b in 1u64..=1_000_000,
                                c in 1u64..=1_000_000, d in 1u64..=1_000_000) {
        let q = PositiveRational::from_u64(a, b).unwrap();
        let r = PositiveRational::from_u64(c, d).unwrap();
        prop_assert_eq!(&(&(&q * &r) / &r), &q);
        prop_assert_eq!(&(&(&q / &r) * &r), &q);
    }

    #[test]
    fn surplus_bound_matches_definition(n in 2u64..=10_000, t in 1u64..=5, x in 1u32..=3) {
        // Both routes computed independently: the per-prime bound vs the
        // definitional comparison of fractions.
        let fact = f(n);
        for j in 0..fact.distinct_primes() {
            let bound = surplus_bound_holds(&fact, j, &nat(t), x).unwrap();
            let lhs = PositiveRational::new(
                sigma_x(&fact, x).unwrap() + nat(t),
                nat(n).pow(x),
            ).unwrap();
            let rhs = abundancy(x, &(nat(n) * fact.prime(j))).unwrap();
            prop_assert_eq!(bound, lhs < rhs, "n={}, j={}, t={}, x={}", n, j, t, x);
        }
    }

    #[test]
    fn step_ratio_times_index_is_grown_index(n in 2u64..=5_000, x in 1u32..=3) {
        let fact = f(n);
        for j in 0..fact.distinct_primes() {
            let ratio = prime_multiplier_ratio(&fact, j, x).unwrap();
            let lhs = &ratio * &abundancy(x, &nat(n)).unwrap();
            let rhs = abundancy(x, &(nat(n) * fact.prime(j))).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn coprime_split_is_maximal(n in 1u64..=1_000_000, m in 2u64..=10_000) {
        let split = coprime_split(&nat(n), &nat(m)).unwrap();
        prop_assert_eq!(&split.coprime_part * &split.m_part, nat(n));
        prop_assert_eq!(split.coprime_part.gcd(&nat(m)), nat(1));
        // maximality: every prime of the m-part divides m
        for (p, _) in factorize(&split.m_part).unwrap().factors() {
            prop_assert_eq!(nat(m) % p, nat(0));
        }
    }

    #[test]
    fn limit_relations(n in 1u64..=5_000, m in 2u64..=500, x in 1u32..=3) {
        let spec = LimitSpec::new(nat(n), nat(m), x).unwrap();
        let limit = limit_general(&spec).unwrap();
        let product = limit_prime_product(&f(m), x).unwrap();
        let split = coprime_split(&nat(n), &nat(m)).unwrap();
        if split.coprime_part == nat(1) {
            // every prime of n divides m
            prop_assert_eq!(&limit.value, &product);
        }
        if nat(n).gcd(&nat(m)) == nat(1) {
            let expected = &abundancy(x, &nat(n)).unwrap() * &product;
            prop_assert_eq!(&limit.value, &expected);
        }
        // the limit strictly dominates every finite term within reach
        let term = abundancy(x, &(nat(n) * nat(m))).unwrap();
        prop_assert!(term < limit.value);
    }
}

#[test]
fn sequence_terms_increase_strictly_and_converge() {
    // I(x, n·m^k) is strictly increasing in k, stays below the exact limit,
    // and lands within 1e-6 once m^k passes 1e6 (products capped at 1e12).
    let cases = [(6u64, 2u64, 1u32), (5, 3, 1), (1, 2, 2), (12, 6, 2), (7, 10, 3)];
    for (n, m, x) in cases {
        let spec = LimitSpec::new(nat(n), nat(m), x).unwrap();
        let limit = limit_general(&spec).unwrap().value;
        let mut previous: Option<PositiveRational> = None;
        let mut argument = nat(n);
        let mut m_power: u64 = 1;
        loop {
            let term = abundancy(x, &argument).unwrap();
            if let Some(prev) = &previous {
                assert!(term > *prev, "term must grow at n={n}, m={m}, x={x}");
            }
            assert!(term < limit, "terms stay below the limit");
            if m_power > 1_000_000 {
                let gap = limit.abs_diff(&term).unwrap();
                let within = gap < PositiveRational::from_u64(1, 1_000_000).unwrap();
                assert!(within, "gap {gap} too large at n={n}, m={m}, x={x}");
                break;
            }
            previous = Some(term);
            match m_power.checked_mul(m) {
                Some(next_power) if argument.clone() * nat(m) <= nat(1_000_000_000_000) => {
                    m_power = next_power;
                    argument *= nat(m);
                }
                _ => break,
            }
        }
    }
}

#[test]
fn attained_values_are_never_certified() {
    // No certifying rule may fire on any value the enumeration oracle
    // proves attained.
    use abundancy_core::classify::{EffortBudget, RuleRegistry};
    let registry = RuleRegistry::standard();
    let effort = EffortBudget::default();
    let bound = 100_000u64;
    let sieve = DivisorSieve::new(bound);
    for x in 1..=3u32 {
        let table = image_enumerate_with(x, bound, &sieve).unwrap();
        for (value, witness) in table.iter() {
            if value.is_one() {
                continue;
            }
            for rule in registry.iter() {
                let mut notes = Vec::new();
                if let Some(cert) = rule.try_certify(value, x, &effort, &mut notes).unwrap() {
                    panic!(
                        "rule {} certified attained value {value} (x={x}, witness {witness}): {cert}",
                        rule.name()
                    );
                }
            }
        }
    }
}

#[test]
fn pruned_search_equals_unpruned_on_attained_values() {
    let bound = 2_000u64;
    let sieve = DivisorSieve::new(bound);
    let table = image_enumerate_with(1, bound, &sieve).unwrap();
    for (value, _) in table.iter() {
        let pruned = search_witness_with(value, 1, bound, true, &sieve).unwrap();
        let full = search_witness_with(value, 1, bound, false, &sieve).unwrap();
        assert_eq!(pruned.witness, full.witness, "value {value}");
    }
}

#[test]
fn factorization_round_trip_to_one_million() {
    for n in 1..=1_000_000u64 {
        let fact = factorize(&nat(n)).unwrap();
        let mut value = 1u64;
        for (p, e) in fact.factors() {
            use num_traits::ToPrimitive;
            value *= p.to_u64().unwrap().pow(*e);
        }
        assert_eq!(value, n);
    }
}

#[test]
fn big_sequence_value_stays_exact() {
    // 2^89 - 1 is prime; σ and the index of 2^88·(2^89-1) must come out
    // exactly at any exponent without overflow.
    let m89 = (Natural::from(1u32) << 89u32) - 1u32;
    let n = (&m89) << 88u32;
    let fact = factorize(&n).unwrap();
    assert_eq!(fact.factors().len(), 2);
    assert_eq!(fact.factors()[0], (nat(2), 88));
    assert_eq!(fact.factors()[1], (m89.clone(), 1));
    let index = abundancy(1, &n).unwrap();
    // the even-perfect form: σ(2^{p-1}) σ(M) = (2^p - 1)(2^p) = 2 N
    assert_eq!(index, PositiveRational::from_u64(2, 1).unwrap());
    let index2 = abundancy(2, &n).unwrap();
    assert!(index2 > PositiveRational::one());
}
