//! Limiting values of `I(x, n·m^k)` as `k → ∞`, ratio invariance along such
//! sequences, and the even-perfect-form sequence `2^{p-1}(2^p - 1)`.

use num_traits::{One, Zero};

use crate::divisor::{abundancy, abundancy_fact};
use crate::error::{Error, Result};
use crate::factor::{factorize, Factorization};
use crate::natural::{nat, Natural};
use crate::primality::{is_prime, primes};
use crate::rational::PositiveRational;

/// Parameters of a limit query `lim_k I(x, n·m^k)`.
#[derive(Clone, Debug)]
pub struct LimitSpec {
    pub n: Natural,
    pub m: Natural,
    pub x: u32,
}

impl LimitSpec {
    /// `m = 1` is accepted but makes the sequence constant; the limit result
    /// carries a degenerate flag in that case.
    pub fn new(n: Natural, m: Natural, x: u32) -> Result<Self> {
        if n.is_zero() || m.is_zero() {
            return Err(Error::domain("limit arguments must be positive"));
        }
        if x == 0 {
            return Err(Error::domain("exponent x must be positive"));
        }
        Ok(LimitSpec { n, m, x })
    }
}

/// Split of `n` against a modulus `m`: `n = coprime_part * m_part`, where
/// `coprime_part` is the largest divisor of `n` coprime to `m` and every
/// prime of `m_part` divides `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoprimeSplit {
    pub coprime_part: Natural,
    pub m_part: Natural,
}

pub fn coprime_split(n: &Natural, m: &Natural) -> Result<CoprimeSplit> {
    if n.is_zero() || m.is_zero() {
        return Err(Error::domain("coprime split arguments must be positive"));
    }
    let mut a = n.clone();
    loop {
        let g = num_integer::Integer::gcd(&a, m);
        if g.is_one() {
            break;
        }
        a /= &g;
    }
    let b = n / &a;
    Ok(CoprimeSplit {
        coprime_part: a,
        m_part: b,
    })
}

/// `Π p^x / (p^x - 1)` over the distinct primes of `m` — the limit of
/// `I(x, m^k)`. The exponents in `m` are irrelevant; `m = 1` yields the
/// empty product, one.
pub fn limit_prime_product(m: &Factorization, x: u32) -> Result<PositiveRational> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    let mut acc = PositiveRational::one();
    for (p, _) in m.factors() {
        let px = p.pow(x);
        let term = PositiveRational::new(px.clone(), px - 1u32)?;
        acc = &acc * &term;
    }
    Ok(acc)
}

/// An exact limit value, flagged when the query was degenerate (`m = 1`, so
/// the sequence is constant and the "limit" is just `I(x, n)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitValue {
    pub value: PositiveRational,
    pub degenerate: bool,
}

/// `lim_k I(x, n·m^k) = I(x, a) · Π p^x/(p^x - 1)` where `a` is the largest
/// divisor of `n` coprime to `m` and the product runs over the primes of `m`.
pub fn limit_general(spec: &LimitSpec) -> Result<LimitValue> {
    if spec.m.is_one() {
        return Ok(LimitValue {
            value: abundancy(spec.x, &spec.n)?,
            degenerate: true,
        });
    }
    let split = coprime_split(&spec.n, &spec.m)?;
    let product = limit_prime_product(&factorize(&spec.m)?, spec.x)?;
    let ia = abundancy(spec.x, &split.coprime_part)?;
    Ok(LimitValue {
        value: &ia * &product,
        degenerate: false,
    })
}

/// Checks the ratio invariance `I(x,n1·m^k)/I(x,n1·m^j) =
/// I(x,n2·m^k)/I(x,n2·m^j)`. Returns `None` when the hypothesis fails (the
/// two arguments have different m-parts), `Some(equal)` otherwise — under
/// the hypothesis the ratio is an invariant of `m` alone, so `Some(true)`.
pub fn ratio_invariance_check(
    n1: &Natural,
    n2: &Natural,
    m: &Natural,
    k: u32,
    j: u32,
    x: u32,
) -> Result<Option<bool>> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let b1 = coprime_split(n1, m)?.m_part;
    let b2 = coprime_split(n2, m)?.m_part;
    if b1 != b2 {
        return Ok(None);
    }
    let ratio = |n: &Natural| -> Result<PositiveRational> {
        let hi = abundancy(x, &(n * m.pow(k)))?;
        let lo = abundancy(x, &(n * m.pow(j)))?;
        Ok(&hi / &lo)
    };
    Ok(Some(ratio(n1)? == ratio(n2)?))
}

/// One term of the even-perfect-form sequence.
#[derive(Clone, Debug)]
pub struct EvenPerfectTerm {
    /// The prime exponent generating the term.
    pub p: u64,
    /// `2^{p-1} (2^p - 1)`.
    pub value: Natural,
    /// `I(x, value)`, exact.
    pub index: PositiveRational,
    /// Whether `2^p - 1` is itself prime (so `value` is a perfect number).
    pub mersenne: bool,
}

/// Cap on sequence length; `2^p - 1` factoring cost grows quickly past it.
pub const DEFAULT_MAX_TERMS: usize = 12;

/// First `count` terms of `N = 2^{p-1}(2^p - 1)` with exact `I(x, N)`.
///
/// With `mersenne_only` the sequence is restricted to exponents `p` for
/// which `2^p - 1` is prime (each term is then a perfect number and the
/// x-th index converges to `2^x/(2^x - 1)` monotonically); otherwise `p`
/// runs over all primes in increasing order.
pub fn even_perfect_sequence(
    count: usize,
    x: u32,
    mersenne_only: bool,
) -> Result<Vec<EvenPerfectTerm>> {
    even_perfect_sequence_with_max(count, x, mersenne_only, DEFAULT_MAX_TERMS)
}

pub fn even_perfect_sequence_with_max(
    count: usize,
    x: u32,
    mersenne_only: bool,
    max_terms: usize,
) -> Result<Vec<EvenPerfectTerm>> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    if count > max_terms {
        return Err(Error::domain(format!(
            "sequence length {count} exceeds the configured maximum {max_terms}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    for p in primes() {
        if out.len() == count {
            break;
        }
        let p32 = u32::try_from(p).expect("sequence exponents are tiny");
        let mersenne_part = (Natural::one() << p32) - 1u32;
        let mersenne = is_prime(&mersenne_part);
        if mersenne_only && !mersenne {
            continue;
        }
        // 2^{p-1} * (2^p - 1), with the factorization assembled directly:
        // the odd part is either a known prime or gets factored.
        let value = (&mersenne_part) << (p32 - 1);
        let mut factors = vec![(nat(2), p32 - 1)];
        if mersenne {
            factors.push((mersenne_part.clone(), 1));
            let f = Factorization::from_parts(factors)?;
            out.push(EvenPerfectTerm {
                p,
                value,
                index: abundancy_fact(&f, x)?,
                mersenne,
            });
        } else {
            let odd = factorize(&mersenne_part)?;
            factors.extend(odd.factors().iter().cloned());
            let f = Factorization::from_parts(factors)?;
            out.push(EvenPerfectTerm {
                p,
                value,
                index: abundancy_fact(&f, x)?,
                mersenne,
            });
        }
    }
    Ok(out)
}
