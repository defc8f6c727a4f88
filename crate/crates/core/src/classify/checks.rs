//! The certifying predicates behind each outlaw rule, plus the two step
//! lemmas they lean on. Each check is a pure function: given the shape
//! parameters it either produces a certificate or declines.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::classify::certificate::{CertCase, Certificate};
use crate::divisor::{abundancy_fact, sigma_prime_power, sigma_x};
use crate::error::{Error, Result};
use crate::factor::{divisor_factorizations, factorize, Factorization};
use crate::natural::Natural;
use crate::rational::PositiveRational;

/// Step ratio `I(x, p_j·n) / I(x, n) = σ_x(p_j^{k_j+1}) /
/// (σ_x(p_j^{k_j+1}) - 1)` for the `j`-th prime of `n` (0-based here).
pub fn prime_multiplier_ratio(n: &Factorization, j: usize, x: u32) -> Result<PositiveRational> {
    if j >= n.distinct_primes() {
        return Err(Error::domain(format!(
            "prime index {j} out of range for a {}-prime factorization",
            n.distinct_primes()
        )));
    }
    let s = sigma_prime_power(n.prime(j), n.exponent(j) + 1, x);
    PositiveRational::new(s.clone(), s - 1u32)
}

/// Surplus bound `t · p_j^x < σ_x(n / p_j^{k_j})` — equivalent to
/// `(σ_x(n) + t)/n^x < I(x, p_j·n)`.
pub fn surplus_bound_holds(n: &Factorization, j: usize, t: &Natural, x: u32) -> Result<bool> {
    if j >= n.distinct_primes() {
        return Err(Error::domain(format!(
            "prime index {j} out of range for a {}-prime factorization",
            n.distinct_primes()
        )));
    }
    if t.is_zero() {
        return Err(Error::domain("t must be positive"));
    }
    let lhs = t * n.prime(j).pow(x);
    let rhs = sigma_x(&n.without_index(j), x)?;
    Ok(lhs < rhs)
}

/// Window rule: `k/m^x` with `gcd(k, m^x) = 1` and `m^x < k < σ_x(m)` is an
/// outlaw. The upper bound is strict: at `k = σ_x(m)` the fraction equals
/// `I(x, m)` itself whenever it is in lowest terms, so the inclusive bound
/// would certify genuine indices.
pub fn certify_t1(k: &Natural, m: &Natural, x: u32) -> Result<Option<Certificate>> {
    if k.is_zero() || m.is_zero() {
        return Err(Error::domain("window rule arguments must be positive"));
    }
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    let mx = m.pow(x);
    if !k.gcd(&mx).is_one() {
        return Ok(None);
    }
    if *k <= mx {
        return Ok(None);
    }
    let sigma = sigma_x(&factorize(m)?, x)?;
    if *k < sigma {
        Ok(Some(Certificate::T1 { m: m.clone() }))
    } else {
        Ok(None)
    }
}

/// Surplus rule: `(σ_x(n) + t)/n^x` in lowest terms is an outlaw when some
/// prime `p_j` of `n` passes the surplus bound and `σ_x(p_j^{k_j})` has a
/// divisor `d^x > 1` with either
///   1. `I(x, p_j^{k_j}) · I(x, d) > (σ_x(n)+t)/n^x` and `gcd(d^x, t) = 1`, or
///   2. `gcd(d^x, n^x·t) = 1`.
///
/// Searches ascending `j` then ascending `d`, preferring clause 2 when both
/// hold at the same `(j, d)`, so certificates are reproducible.
pub fn certify_t2(
    n: &Factorization,
    t: &Natural,
    x: u32,
    divisor_cap: usize,
) -> Result<Option<Certificate>> {
    if t.is_zero() {
        return Err(Error::domain("t must be positive"));
    }
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    if n.is_one() {
        return Ok(None); // no prime index to work with
    }
    let sigma_n = sigma_x(n, x)?;
    let numerator = &sigma_n + t;
    let nx = n.value_pow(x);
    if !numerator.gcd(&nx).is_one() {
        return Ok(None);
    }
    let q = PositiveRational::new(numerator, nx.clone())?;
    let nxt = &nx * t;

    for j in 0..n.distinct_primes() {
        if !surplus_bound_holds(n, j, t, x)? {
            continue;
        }
        let pj = n.prime(j);
        let kj = n.exponent(j);
        let sigma_pk = sigma_prime_power(pj, kj, x);
        let ipjk = PositiveRational::new(sigma_pk.clone(), pj.pow(x * kj))?;
        let sigma_pk_fact = factorize(&sigma_pk)?;
        let (roots, _) =
            divisor_factorizations(&sigma_pk_fact.xth_root_part(x), Some(divisor_cap));
        for df in roots {
            if df.is_one() {
                continue; // d^x must exceed one
            }
            let d = df.value();
            let dx = d.pow(x);
            if dx.gcd(&nxt).is_one() {
                return Ok(Some(Certificate::T2 {
                    n: n.value(),
                    t: t.clone(),
                    j: j + 1,
                    d,
                    case: CertCase::Case2,
                }));
            }
            if dx.gcd(t).is_one() {
                let product = &ipjk * &abundancy_fact(&df, x)?;
                if product > q {
                    return Ok(Some(Certificate::T2 {
                        n: n.value(),
                        t: t.clone(),
                        j: j + 1,
                        d,
                        case: CertCase::Case1,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Gap rule: `k/(l·m^x) > 1` with `gcd(k, l·m^x) = 1` is an outlaw when some
/// `n ≥ 2` with `n^x | l·m^x` satisfies
///   1. `k/(l·m^x) < I(x, p_i·n)` for every prime `p_i` of `n`, and
///   2. `σ_x(n)·(l·m^x/n^x)` has a divisor `d^x` with `gcd(d^x, k) = 1` and
///      `I(x, d)` at least the step ratio of some prime of `n`.
///
/// Candidates are searched smallest `n` first, then ascending `d`, then
/// ascending `j`.
pub fn certify_t3(
    k: &Natural,
    l: &Natural,
    m: &Natural,
    x: u32,
    divisor_cap: usize,
) -> Result<Option<Certificate>> {
    if k.is_zero() || l.is_zero() || m.is_zero() {
        return Err(Error::domain("gap rule arguments must be positive"));
    }
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    let den = l * m.pow(x);
    if !k.gcd(&den).is_one() {
        return Ok(None);
    }
    if *k <= den {
        return Ok(None); // the fraction must exceed one
    }
    let q = PositiveRational::new(k.clone(), den.clone())?;
    let den_fact = factorize(&den)?;
    let (candidates, _) =
        divisor_factorizations(&den_fact.xth_root_part(x), Some(divisor_cap));

    'candidate: for nf in candidates {
        if nf.is_one() {
            continue;
        }
        let s = nf.distinct_primes();
        for i in 0..s {
            if q >= abundancy_fact(&nf.bump_index(i), x)? {
                continue 'candidate;
            }
        }
        let nx = nf.value_pow(x);
        let (cofactor, rem) = den.div_rem(&nx);
        debug_assert!(rem.is_zero(), "candidate n^x must divide the denominator");
        let product = sigma_x(&nf, x)? * cofactor;
        let product_fact = factorize(&product)?;
        let (d_roots, _) =
            divisor_factorizations(&product_fact.xth_root_part(x), Some(divisor_cap));
        let ratios: Vec<PositiveRational> = (0..s)
            .map(|j| prime_multiplier_ratio(&nf, j, x))
            .collect::<Result<_>>()?;
        for df in d_roots {
            if df.is_one() {
                continue;
            }
            let d = df.value();
            if !d.pow(x).gcd(k).is_one() {
                continue;
            }
            let id = abundancy_fact(&df, x)?;
            if let Some(j) = (0..s).find(|&j| id >= ratios[j]) {
                return Ok(Some(Certificate::T3 {
                    n: nf.value(),
                    l: l.clone(),
                    m: m.clone(),
                    j: j + 1,
                    d,
                }));
            }
        }
    }
    Ok(None)
}
