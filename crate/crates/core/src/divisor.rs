//! The sum-of-divisors function `σ_x` and the x-th abundancy index
//! `I(x, n) = σ_x(n) / n^x`.
//!
//! `σ_x` is evaluated through the per-prime geometric closed form
//! `Π (p^{x(k+1)} - 1) / (p^x - 1)`; divisor enumeration appears only as a
//! test oracle. Both `σ_x` and `I(x, ·)` are multiplicative.

use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::{factorize, Factorization};
use crate::natural::Natural;
use crate::rational::PositiveRational;

/// A validated `(x, n)` query: exponent and argument, both positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbundancyQuery {
    x: u32,
    n: Natural,
}

impl AbundancyQuery {
    pub fn new(x: u32, n: Natural) -> Result<Self> {
        if x == 0 {
            return Err(Error::domain("exponent x must be positive"));
        }
        if n == Natural::default() {
            return Err(Error::domain("argument n must be positive"));
        }
        Ok(AbundancyQuery { x, n })
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }
}

/// `σ_x` of a prime power `p^k`, via the geometric closed form.
pub(crate) fn sigma_prime_power(p: &Natural, k: u32, x: u32) -> Natural {
    debug_assert!(x >= 1);
    let px = p.pow(x);
    let numerator = p.pow(x * (k + 1)) - 1u32;
    let denominator = &px - 1u32;
    let (q, r) = num_integer::Integer::div_rem(&numerator, &denominator);
    // The geometric sum is exact by construction; a remainder means the
    // factorization fed to us was corrupt.
    debug_assert!(
        r == Natural::default(),
        "inexact geometric quotient for p={p}, k={k}, x={x}"
    );
    q
}

/// `σ_x(n)` from a factorization of `n`.
pub fn sigma_x(f: &Factorization, x: u32) -> Result<Natural> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    Ok(f.factors()
        .iter()
        .fold(Natural::one(), |acc, (p, k)| {
            acc * sigma_prime_power(p, *k, x)
        }))
}

/// `σ_x(n)` straight from `n`.
pub fn sigma_of(n: &Natural, x: u32) -> Result<Natural> {
    sigma_x(&factorize(n)?, x)
}

/// `I(x, n) = σ_x(n) / n^x` in lowest terms.
pub fn abundancy(x: u32, n: &Natural) -> Result<PositiveRational> {
    abundancy_fact(&factorize(n)?, x)
}

/// `I(x, n)` from a factorization of `n`.
pub fn abundancy_fact(f: &Factorization, x: u32) -> Result<PositiveRational> {
    let sigma = sigma_x(f, x)?;
    PositiveRational::new(sigma, f.value_pow(x))
}

/// Classification of `n` by comparing `I(1, n)` with two, exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeficiencyClass {
    Deficient,
    Perfect,
    Abundant,
}

impl std::fmt::Display for DeficiencyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeficiencyClass::Deficient => write!(f, "deficient"),
            DeficiencyClass::Perfect => write!(f, "perfect"),
            DeficiencyClass::Abundant => write!(f, "abundant"),
        }
    }
}

pub fn deficiency_class(n: &Natural) -> Result<DeficiencyClass> {
    let sigma = sigma_of(n, 1)?;
    Ok(match sigma.cmp(&(n * 2u32)) {
        std::cmp::Ordering::Less => DeficiencyClass::Deficient,
        std::cmp::Ordering::Equal => DeficiencyClass::Perfect,
        std::cmp::Ordering::Greater => DeficiencyClass::Abundant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::divisors;
    use crate::natural::nat;

    fn sig(n: u64, x: u32) -> Natural {
        sigma_of(&nat(n), x).unwrap()
    }

    #[test]
    fn sigma_named_cases() {
        assert_eq!(sig(6, 1), nat(12)); // 1+2+3+6
        assert_eq!(sig(6, 2), nat(50)); // 1+4+9+36
        assert_eq!(sig(1, 1), nat(1));
        assert_eq!(sig(1, 7), nat(1));
        assert_eq!(sig(12, 1), nat(28));
    }

    #[test]
    fn abundancy_named_cases() {
        assert_eq!(
            abundancy(1, &nat(6)).unwrap(),
            PositiveRational::from_u64(2, 1).unwrap()
        );
        assert_eq!(
            abundancy(2, &nat(6)).unwrap(),
            PositiveRational::from_u64(25, 18).unwrap()
        );
        assert_eq!(abundancy(5, &nat(1)).unwrap(), PositiveRational::one());
    }

    #[test]
    fn abundancy_exceeds_one_for_nontrivial_arguments() {
        for n in 2..200u64 {
            for x in 1..=3u32 {
                let q = abundancy(x, &nat(n)).unwrap();
                assert!(q > PositiveRational::one(), "I({x},{n}) = {q}");
            }
        }
    }

    #[test]
    fn deficiency_named_cases() {
        assert_eq!(deficiency_class(&nat(8)).unwrap(), DeficiencyClass::Deficient);
        assert_eq!(deficiency_class(&nat(28)).unwrap(), DeficiencyClass::Perfect);
        assert_eq!(deficiency_class(&nat(12)).unwrap(), DeficiencyClass::Abundant);
        assert_eq!(deficiency_class(&nat(1)).unwrap(), DeficiencyClass::Deficient);
    }

    #[test]
    fn closed_form_matches_divisor_sum_oracle() {
        for n in 1..=500u64 {
            let f = factorize(&nat(n)).unwrap();
            for x in 1..=3u32 {
                let brute: Natural = divisors(&f).iter().map(|d| d.pow(x)).sum();
                assert_eq!(sigma_x(&f, x).unwrap(), brute, "σ_{x}({n})");
            }
        }
    }

    #[test]
    fn query_validation() {
        assert!(AbundancyQuery::new(0, nat(5)).is_err());
        assert!(AbundancyQuery::new(1, nat(0)).is_err());
        let q = AbundancyQuery::new(2, nat(5)).unwrap();
        assert_eq!(q.x(), 2);
        assert_eq!(q.n(), &nat(5));
    }
}
