//! Prime factorizations: construction, divisor enumeration, exponentwise
//! gcd/lcm, and x-th power splitting of denominators.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::natural::{nat, Natural};
use crate::primality::{is_prime, is_prime_u64, small_primes, SMALL_PRIME_LIMIT};

/// Canonical factorization of a positive integer: strictly increasing primes
/// with positive exponents. The empty list represents 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    factors: Vec<(Natural, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { factors: vec![] }
    }

    /// Validating constructor: primes must be strictly increasing, pass a
    /// primality check, and carry positive exponents.
    pub fn from_parts(factors: Vec<(Natural, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::domain("factor primes must be strictly increasing"));
            }
        }
        for (p, e) in &factors {
            if *e == 0 {
                return Err(Error::domain(format!("exponent of {p} must be positive")));
            }
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
        }
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn prime(&self, idx: usize) -> &Natural {
        &self.factors[idx].0
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.factors[idx].1
    }

    pub fn value(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// `value()^x` computed by scaling exponents.
    pub fn value_pow(&self, x: u32) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(e * x))
    }

    /// `Π (e_i + 1)` — the divisor count.
    pub fn num_divisors(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (_, e)| acc * nat(u64::from(*e) + 1))
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, _)| acc * p)
    }

    /// Remove the `idx`-th prime power entirely (`n / p_j^{k_j}`).
    pub fn without_index(&self, idx: usize) -> Factorization {
        let mut factors = self.factors.clone();
        factors.remove(idx);
        Factorization { factors }
    }

    /// Multiply by one extra copy of the `idx`-th prime (`p_j * n`).
    pub fn bump_index(&self, idx: usize) -> Factorization {
        let mut factors = self.factors.clone();
        factors[idx].1 += 1;
        Factorization { factors }
    }

    /// Multiply by a prime that may or may not already occur.
    pub fn multiply_prime(&self, p: &Natural) -> Factorization {
        let mut factors = self.factors.clone();
        match factors.binary_search_by(|(q, _)| q.cmp(p)) {
            Ok(i) => factors[i].1 += 1,
            Err(i) => factors.insert(i, (p.clone(), 1)),
        }
        Factorization { factors }
    }

    /// The factorization of `value()^x`.
    pub fn pow(&self, x: u32) -> Factorization {
        if x == 0 {
            return Factorization::one();
        }
        Factorization {
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), e * x))
                .collect(),
        }
    }

    /// Exponents floored by `x`: the largest `b` with `b^x` dividing the value.
    pub fn xth_root_part(&self, x: u32) -> Factorization {
        Factorization {
            factors: self
                .factors
                .iter()
                .filter_map(|(p, e)| {
                    let q = e / x;
                    (q > 0).then(|| (p.clone(), q))
                })
                .collect(),
        }
    }

    /// Exponents ceiled by `x`: the smallest integer whose x-th power is
    /// divisible by the value.
    pub fn xth_ceil_part(&self, x: u32) -> Factorization {
        Factorization {
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), (e + x - 1) / x))
                .collect(),
        }
    }

    /// Does `self`'s value divide `other`'s value?
    pub fn divides(&self, other: &Factorization) -> bool {
        self.factors.iter().all(|(p, e)| {
            other
                .factors
                .binary_search_by(|(q, _)| q.cmp(p))
                .map(|i| other.factors[i].1 >= *e)
                .unwrap_or(false)
        })
    }
}

/// Options for the factorization pipeline. Trial division runs up to
/// `trial_bound` (and never past the square root); what remains goes through
/// a primality test and Pollard's rho.
#[derive(Clone, Debug)]
pub struct FactorOptions {
    pub trial_bound: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            trial_bound: 1_000_000,
        }
    }
}

/// Factor a positive integer. `0` is a domain error.
pub fn factorize(n: &Natural) -> Result<Factorization> {
    factorize_with(n, &FactorOptions::default())
}

pub fn factorize_with(n: &Natural, opts: &FactorOptions) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor 0"));
    }
    let mut map: BTreeMap<Natural, u32> = BTreeMap::new();
    if let Some(v) = n.to_u64() {
        let mut small: BTreeMap<u64, u32> = BTreeMap::new();
        factor_u64_into(v, opts.trial_bound, &mut small);
        for (p, e) in small {
            map.insert(nat(p), e);
        }
    } else {
        factor_big_into(n.clone(), opts, &mut map);
    }
    Ok(Factorization {
        factors: map.into_iter().collect(),
    })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Pollard rho (Floyd cycle detection) on an odd composite. Deterministic:
/// the polynomial offset steps 1, 2, 3, ... until a split is found.
fn pollard_rho_u64(n: u64) -> u64 {
    debug_assert!(n > 3 && n % 2 == 1 && !is_prime_u64(n));
    for c in 1u64.. {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        loop {
            x = step(x);
            y = step(step(y));
            let d = gcd_u64(x.abs_diff(y), n);
            if d == n {
                break; // cycle collapsed; retry with the next offset
            }
            if d > 1 {
                return d;
            }
        }
    }
    unreachable!()
}

fn factor_u64_into(mut n: u64, trial_bound: u64, out: &mut BTreeMap<u64, u32>) {
    if n <= 1 {
        return;
    }
    for &p in small_primes() {
        let p = p as u64;
        if p > trial_bound || p * p > n {
            break;
        }
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    // Continue with an odd wheel past the sieved table when the caller asked
    // for a deeper trial bound.
    if n > 1 && trial_bound > SMALL_PRIME_LIMIT {
        let mut d = SMALL_PRIME_LIMIT + 1;
        while d <= trial_bound && d.saturating_mul(d) <= n {
            while n % d == 0 {
                *out.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 2;
        }
    }
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho_u64(n);
    factor_u64_into(d, trial_bound, out);
    factor_u64_into(n / d, trial_bound, out);
}

fn pollard_rho_big(n: &Natural) -> Natural {
    for c in 1u32.. {
        let c = nat(u64::from(c));
        let step = |x: &Natural| (x * x + &c) % n;
        let mut x = nat(2);
        let mut y = nat(2);
        loop {
            x = step(&x);
            y = step(&step(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            let d = diff.gcd(n);
            if d == *n {
                break;
            }
            if !d.is_one() {
                return d;
            }
        }
    }
    unreachable!()
}

fn factor_big_into(mut n: Natural, opts: &FactorOptions, out: &mut BTreeMap<Natural, u32>) {
    for &p in small_primes() {
        let p64 = p as u64;
        if p64 > opts.trial_bound {
            break;
        }
        let pb = nat(p64);
        while (&n % &pb).is_zero() {
            *out.entry(pb.clone()).or_insert(0) += 1;
            n /= &pb;
        }
        if n.is_one() {
            return;
        }
        // Dropping under the word size lets the fast path finish the job.
        if let Some(v) = n.to_u64() {
            let mut small: BTreeMap<u64, u32> = BTreeMap::new();
            factor_u64_into(v, opts.trial_bound, &mut small);
            for (q, e) in small {
                *out.entry(nat(q)).or_insert(0) += e;
            }
            return;
        }
    }
    if n.is_one() {
        return;
    }
    if let Some(v) = n.to_u64() {
        let mut small: BTreeMap<u64, u32> = BTreeMap::new();
        factor_u64_into(v, opts.trial_bound, &mut small);
        for (q, e) in small {
            *out.entry(nat(q)).or_insert(0) += e;
        }
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho_big(&n);
    let q = &n / &d;
    factor_big_into(d, opts, out);
    factor_big_into(q, opts, out);
}

/// Exponentwise minimum: the factorization of `gcd(a, b)`.
pub fn gcd_fact(a: &Factorization, b: &Factorization) -> Factorization {
    let mut factors = Vec::new();
    let mut i = 0;
    let mut j = 0;
    while i < a.factors.len() && j < b.factors.len() {
        match a.factors[i].0.cmp(&b.factors[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                factors.push((
                    a.factors[i].0.clone(),
                    a.factors[i].1.min(b.factors[j].1),
                ));
                i += 1;
                j += 1;
            }
        }
    }
    Factorization { factors }
}

/// Exponentwise maximum: the factorization of `lcm(a, b)`.
pub fn lcm_fact(a: &Factorization, b: &Factorization) -> Factorization {
    let mut factors = Vec::new();
    let mut i = 0;
    let mut j = 0;
    while i < a.factors.len() && j < b.factors.len() {
        match a.factors[i].0.cmp(&b.factors[j].0) {
            std::cmp::Ordering::Less => {
                factors.push(a.factors[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                factors.push(b.factors[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                factors.push((
                    a.factors[i].0.clone(),
                    a.factors[i].1.max(b.factors[j].1),
                ));
                i += 1;
                j += 1;
            }
        }
    }
    factors.extend_from_slice(&a.factors[i..]);
    factors.extend_from_slice(&b.factors[j..]);
    Factorization { factors }
}

/// All divisors in ascending order.
pub fn divisors(f: &Factorization) -> Vec<Natural> {
    let (list, truncated) = bounded_divisors(f.factors(), None);
    debug_assert!(!truncated);
    list.into_iter().map(|(v, _)| v).collect()
}

/// Ascending list of `d` such that `d^x` divides the value of `f`, together
/// with a flag reporting whether the enumeration was cut off at `cap`.
/// Includes `d = 1`.
pub fn power_divisor_roots(
    f: &Factorization,
    x: u32,
    cap: Option<usize>,
) -> (Vec<Natural>, bool) {
    let root = f.xth_root_part(x);
    let (list, truncated) = bounded_divisors(root.factors(), cap);
    (list.into_iter().map(|(v, _)| v).collect(), truncated)
}

/// Ascending divisors of `f`'s value as factorizations, cut off at `cap`.
pub fn divisor_factorizations(
    f: &Factorization,
    cap: Option<usize>,
) -> (Vec<Factorization>, bool) {
    let (list, truncated) = bounded_divisors(f.factors(), cap);
    let base = f.factors();
    let facts = list
        .into_iter()
        .map(|(_, exps)| Factorization {
            factors: base
                .iter()
                .zip(exps.iter())
                .filter(|(_, e)| **e > 0)
                .map(|((p, _), e)| (p.clone(), *e))
                .collect(),
        })
        .collect();
    (facts, truncated)
}

/// Core divisor enumeration over an exponent lattice. Returns divisors in
/// ascending value order with their exponent vectors. With a cap, only the
/// `cap` smallest divisors are produced (lazy frontier expansion); without
/// one, the full lattice is expanded and sorted.
fn bounded_divisors(
    base: &[(Natural, u32)],
    cap: Option<usize>,
) -> (Vec<(Natural, Vec<u32>)>, bool) {
    let total: u128 = base
        .iter()
        .try_fold(1u128, |acc, (_, e)| acc.checked_mul(*e as u128 + 1))
        .unwrap_or(u128::MAX);

    if cap.map_or(true, |c| total <= c as u128) {
        let mut out: Vec<(Natural, Vec<u32>)> = vec![(Natural::one(), vec![0; base.len()])];
        for (i, (p, e)) in base.iter().enumerate() {
            let mut extended = Vec::with_capacity(out.len() * (*e as usize + 1));
            for (v, exps) in &out {
                let mut pp = Natural::one();
                for k in 0..=*e {
                    if k > 0 {
                        pp *= p;
                    }
                    let mut exps = exps.clone();
                    exps[i] = k;
                    extended.push((v * &pp, exps));
                }
            }
            out = extended;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        return (out, false);
    }

    // Lazy ascending expansion: repeatedly take the smallest not-yet-emitted
    // divisor and seed its single-prime successors.
    let cap = cap.unwrap();
    let mut frontier: BTreeMap<Natural, Vec<u32>> = BTreeMap::new();
    frontier.insert(Natural::one(), vec![0; base.len()]);
    let mut out = Vec::with_capacity(cap);
    while out.len() < cap {
        let Some((v, exps)) = frontier.pop_first() else {
            return (out, false);
        };
        for (i, (p, e)) in base.iter().enumerate() {
            if exps[i] < *e {
                let child = &v * p;
                frontier.entry(child).or_insert_with(|| {
                    let mut exps = exps.clone();
                    exps[i] += 1;
                    exps
                });
            }
        }
        out.push((v, exps));
    }
    (out, true)
}

/// Decomposition `den = c * b^x` with `b` maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSplit {
    pub c: Natural,
    pub b: Natural,
    pub x: u32,
}

/// Split `den` as `c * b^x` where for every prime `p`, the exponent of `p`
/// in `b` is `⌊e_p / x⌋` and in `c` is `e_p mod x`.
pub fn xth_power_split(den: &Natural, x: u32) -> Result<PowerSplit> {
    if x == 0 {
        return Err(Error::domain("power split exponent must be positive"));
    }
    if den.is_zero() {
        return Err(Error::domain("cannot split 0"));
    }
    let f = factorize(den)?;
    let mut c = Natural::one();
    let mut b = Natural::one();
    for (p, e) in f.factors() {
        b *= p.pow(e / x);
        c *= p.pow(e % x);
    }
    Ok(PowerSplit { c, b, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u64) -> Factorization {
        factorize(&nat(n)).unwrap()
    }

    #[test]
    fn factorize_named_cases() {
        assert!(f(1).is_one());
        assert_eq!(
            f(12).factors(),
            &[(nat(2), 2), (nat(3), 1)],
            "12 = 2^2 * 3"
        );
        // 2^13 - 1 = 8191 is prime
        assert_eq!(f(8191).factors(), &[(nat(8191), 1)]);
        assert!(factorize(&nat(0)).is_err());
    }

    #[test]
    fn factorize_round_trips_value() {
        for n in 1..=3000u64 {
            assert_eq!(f(n).value(), nat(n), "round trip at {n}");
        }
    }

    #[test]
    fn factorize_semiprime_beyond_trial_bound() {
        // both factors ~1e9, product needs rho after trial division gives up
        let p = 1_000_000_007u64;
        let q = 1_000_000_009u64;
        let n = nat(p) * nat(q);
        let fact = factorize(&n).unwrap();
        assert_eq!(fact.factors(), &[(nat(p), 1), (nat(q), 1)]);
    }

    #[test]
    fn factorize_wide_mersenne_composite() {
        // 2^37 - 1 = 223 * 616318177, reached through the wide path when
        // multiplied beyond u64
        let m37 = (Natural::one() << 37u32) - 1u32;
        let n = &m37 * (Natural::one() << 64u32);
        let fact = factorize(&n).unwrap();
        assert_eq!(
            fact.factors(),
            &[(nat(2), 64), (nat(223), 1), (nat(616_318_177), 1)]
        );
        assert_eq!(fact.value(), n);
    }

    #[test]
    fn divisors_named_cases() {
        assert_eq!(divisors(&f(1)), vec![nat(1)]);
        assert_eq!(divisors(&f(6)), vec![nat(1), nat(2), nat(3), nat(6)]);
        assert_eq!(
            divisors(&f(12)),
            vec![nat(1), nat(2), nat(3), nat(4), nat(6), nat(12)]
        );
        assert_eq!(f(12).num_divisors(), nat(6));
    }

    #[test]
    fn gcd_lcm_named_cases() {
        let g = gcd_fact(&f(12), &f(18));
        let l = lcm_fact(&f(12), &f(18));
        assert_eq!(g.value(), nat(6));
        assert_eq!(l.value(), nat(36));
        assert_eq!(gcd_fact(&f(40), &f(1)).value(), nat(1));
        assert_eq!(gcd_fact(&f(8), &f(27)).value(), nat(1));
        assert_eq!(lcm_fact(&f(8), &f(27)).value(), nat(216));
        // gcd * lcm = a * b
        assert_eq!(g.value() * l.value(), nat(12) * nat(18));
    }

    #[test]
    fn power_split_named_cases() {
        let s = xth_power_split(&nat(36), 2).unwrap();
        assert_eq!((s.c, s.b), (nat(1), nat(6)));
        let s = xth_power_split(&nat(12), 2).unwrap();
        assert_eq!((s.c, s.b), (nat(3), nat(2)));
        let s = xth_power_split(&nat(720), 1).unwrap();
        assert_eq!((s.c, s.b), (nat(1), nat(720)));
    }

    #[test]
    fn power_divisor_roots_ascending() {
        // 144 = 2^4 * 3^2; squares dividing it: 1, 4, 9, 16, 36, 144
        let (roots, truncated) = power_divisor_roots(&f(144), 2, None);
        assert!(!truncated);
        assert_eq!(roots, vec![nat(1), nat(2), nat(3), nat(4), nat(6), nat(12)]);
    }

    #[test]
    fn bounded_enumeration_truncates_ascending() {
        let fact = f(720_720); // 2^4 3^2 5 7 11 13 — 240 divisors
        let (all, _) = divisor_factorizations(&fact, None);
        let (capped, truncated) = divisor_factorizations(&fact, Some(17));
        assert!(truncated);
        assert_eq!(capped.len(), 17);
        for (a, b) in all.iter().zip(capped.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn from_parts_validates() {
        assert!(Factorization::from_parts(vec![(nat(4), 1)]).is_err());
        assert!(Factorization::from_parts(vec![(nat(3), 1), (nat(2), 1)]).is_err());
        assert!(Factorization::from_parts(vec![(nat(2), 0)]).is_err());
        let ok = Factorization::from_parts(vec![(nat(2), 2), (nat(3), 1)]).unwrap();
        assert_eq!(ok.value(), nat(12));
    }

    #[test]
    fn structural_helpers() {
        let n = f(360); // 2^3 3^2 5
        assert_eq!(n.without_index(1).value(), nat(40));
        assert_eq!(n.bump_index(2).value(), nat(1800));
        assert_eq!(n.multiply_prime(&nat(7)).value(), nat(2520));
        assert_eq!(n.multiply_prime(&nat(2)).value(), nat(720));
        assert_eq!(n.pow(2).value(), nat(360) * nat(360));
        assert_eq!(n.xth_root_part(2).value(), nat(6));
        assert_eq!(n.xth_ceil_part(2).value(), nat(60));
        assert_eq!(n.radical(), nat(30));
        assert!(f(6).divides(&n));
        assert!(!f(7).divides(&n));
    }
}
