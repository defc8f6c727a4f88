//! Independent certificate checker: re-derives every hypothesis of a
//! certificate from scratch, trusting nothing recorded by the search that
//! produced it beyond the parameters themselves.

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::classify::certificate::{CertCase, Certificate};
use crate::classify::checks::{prime_multiplier_ratio, surplus_bound_holds};
use crate::divisor::{abundancy_fact, sigma_prime_power, sigma_x};
use crate::factor::factorize;
use crate::natural::Natural;
use crate::primality::is_prime;
use crate::rational::PositiveRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("certificate rejected: {0}")]
pub struct VerifyError(pub String);

fn reject<T>(msg: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError(msg.into()))
}

/// Re-verify `cert` as a proof that `q` is an x-th abundancy outlaw.
pub fn verify_certificate(
    q: &PositiveRational,
    x: u32,
    cert: &Certificate,
) -> Result<(), VerifyError> {
    if x == 0 {
        return reject("exponent x must be positive");
    }
    match cert {
        Certificate::T1 { m } => verify_t1(q, x, m),
        Certificate::T2 { n, t, j, d, case } => verify_t2(q, x, n, t, *j, d, *case),
        Certificate::T3 { n, l, m, j, d } => verify_t3(q, x, n, l, m, *j, d),
        Certificate::PrimePowerX { p, x_src } => verify_prime_power(q, x, p, *x_src),
    }
}

fn verify_t1(q: &PositiveRational, x: u32, m: &Natural) -> Result<(), VerifyError> {
    if m.is_zero() {
        return reject("m must be positive");
    }
    let mx = m.pow(x);
    if *q.den() != mx {
        return reject(format!("denominator {} is not {m}^{x}", q.den()));
    }
    if !q.num().gcd(&mx).is_one() {
        return reject("numerator and denominator share a factor");
    }
    if *q.num() <= mx {
        return reject("numerator does not exceed m^x");
    }
    let sigma = sigma_x(&factorize(m).map_err(|e| VerifyError(e.to_string()))?, x)
        .map_err(|e| VerifyError(e.to_string()))?;
    if *q.num() >= sigma {
        return reject(format!(
            "numerator {} is not strictly below σ_{x}({m}) = {sigma}",
            q.num()
        ));
    }
    Ok(())
}

fn verify_t2(
    q: &PositiveRational,
    x: u32,
    n: &Natural,
    t: &Natural,
    j: usize,
    d: &Natural,
    case: CertCase,
) -> Result<(), VerifyError> {
    if t.is_zero() {
        return reject("t must be positive");
    }
    let nf = factorize(n).map_err(|e| VerifyError(e.to_string()))?;
    let nx = nf.value_pow(x);
    if *q.den() != nx {
        return reject(format!("denominator {} is not {n}^{x}", q.den()));
    }
    let sigma_n = sigma_x(&nf, x).map_err(|e| VerifyError(e.to_string()))?;
    if *q.num() != &sigma_n + t {
        return reject(format!(
            "numerator {} is not σ_{x}({n}) + {t}",
            q.num()
        ));
    }
    if !q.num().gcd(&nx).is_one() {
        return reject("fraction is not in lowest terms");
    }
    if j == 0 || j > nf.distinct_primes() {
        return reject(format!("prime index {j} out of range"));
    }
    let j0 = j - 1;
    if !surplus_bound_holds(&nf, j0, t, x).map_err(|e| VerifyError(e.to_string()))? {
        return reject(format!(
            "surplus bound fails at p_{j} = {}",
            nf.prime(j0)
        ));
    }
    if d.is_one() || d.is_zero() {
        return reject("d^x must exceed one");
    }
    let dx = d.pow(x);
    let sigma_pk = sigma_prime_power(nf.prime(j0), nf.exponent(j0), x);
    if !(&sigma_pk % &dx).is_zero() {
        return reject(format!("{d}^{x} does not divide σ_{x}(p_{j}^k)"));
    }
    match case {
        CertCase::Case1 => {
            if !dx.gcd(t).is_one() {
                return reject("clause 1 needs gcd(d^x, t) = 1");
            }
            let ipjk = PositiveRational::new(sigma_pk, nf.prime(j0).pow(x * nf.exponent(j0)))
                .map_err(|e| VerifyError(e.to_string()))?;
            let df = factorize(d).map_err(|e| VerifyError(e.to_string()))?;
            let id = abundancy_fact(&df, x).map_err(|e| VerifyError(e.to_string()))?;
            if &ipjk * &id <= *q {
                return reject("clause 1 index product does not exceed the value");
            }
        }
        CertCase::Case2 => {
            if !dx.gcd(&(&nx * t)).is_one() {
                return reject("clause 2 needs gcd(d^x, n^x·t) = 1");
            }
        }
    }
    Ok(())
}

fn verify_t3(
    q: &PositiveRational,
    x: u32,
    n: &Natural,
    l: &Natural,
    m: &Natural,
    j: usize,
    d: &Natural,
) -> Result<(), VerifyError> {
    if l.is_zero() || m.is_zero() {
        return reject("l and m must be positive");
    }
    let den = l * m.pow(x);
    if *q.den() != den {
        return reject(format!("denominator {} is not l·m^{x} = {den}", q.den()));
    }
    if !q.num().gcd(&den).is_one() {
        return reject("fraction is not in lowest terms");
    }
    if *q <= PositiveRational::one() {
        return reject("the value must exceed one");
    }
    let nf = factorize(n).map_err(|e| VerifyError(e.to_string()))?;
    if nf.is_one() {
        return reject("n must exceed one");
    }
    let nx = nf.value_pow(x);
    let (cofactor, rem) = den.div_rem(&nx);
    if !rem.is_zero() {
        return reject(format!("{n}^{x} does not divide the denominator"));
    }
    for i in 0..nf.distinct_primes() {
        let grown =
            abundancy_fact(&nf.bump_index(i), x).map_err(|e| VerifyError(e.to_string()))?;
        if *q >= grown {
            return reject(format!(
                "value is not below I({x}, {}·{n})",
                nf.prime(i)
            ));
        }
    }
    if j == 0 || j > nf.distinct_primes() {
        return reject(format!("prime index {j} out of range"));
    }
    if d.is_zero() {
        return reject("d must be positive");
    }
    let dx = d.pow(x);
    let product =
        sigma_x(&nf, x).map_err(|e| VerifyError(e.to_string()))? * cofactor;
    if !(&product % &dx).is_zero() {
        return reject(format!("{d}^{x} does not divide σ_{x}(n)·(l·m^{x}/n^{x})"));
    }
    if !dx.gcd(q.num()).is_one() {
        return reject("d^x shares a factor with the numerator");
    }
    let df = factorize(d).map_err(|e| VerifyError(e.to_string()))?;
    let id = abundancy_fact(&df, x).map_err(|e| VerifyError(e.to_string()))?;
    let ratio =
        prime_multiplier_ratio(&nf, j - 1, x).map_err(|e| VerifyError(e.to_string()))?;
    if id < ratio {
        return reject(format!(
            "I({x}, {d}) = {id} does not reach the step ratio {ratio} at index {j}"
        ));
    }
    Ok(())
}

fn verify_prime_power(
    q: &PositiveRational,
    x: u32,
    p: &Natural,
    x_src: u32,
) -> Result<(), VerifyError> {
    if x != 1 {
        return reject("cross-exponent certificates apply at exponent one only");
    }
    if x_src < 2 {
        return reject("source exponent must exceed one");
    }
    if !is_prime(p) {
        return reject(format!("{p} is not prime"));
    }
    let px = p.pow(x_src);
    let expected =
        PositiveRational::new(&px + 1u32, px.clone()).map_err(|e| VerifyError(e.to_string()))?;
    if *q != expected {
        return reject(format!("value is not (1 + {p}^{x_src})/{p}^{x_src}"));
    }
    // Window conditions at exponent one with m = p^{x_src}.
    verify_t1(q, 1, &px)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natural::nat;

    fn q(n: u64, d: u64) -> PositiveRational {
        PositiveRational::from_u64(n, d).unwrap()
    }

    #[test]
    fn accepts_valid_certificates() {
        verify_certificate(&q(5, 4), 1, &Certificate::T1 { m: nat(4) }).unwrap();
        verify_certificate(&q(37, 36), 2, &Certificate::T1 { m: nat(6) }).unwrap();
        verify_certificate(
            &q(29, 12),
            1,
            &Certificate::T2 {
                n: nat(12),
                t: nat(1),
                j: 1,
                d: nat(7),
                case: CertCase::Case2,
            },
        )
        .unwrap();
        verify_certificate(
            &q(5, 4),
            1,
            &Certificate::T3 {
                n: nat(2),
                l: nat(1),
                m: nat(4),
                j: 1,
                d: nat(2),
            },
        )
        .unwrap();
        verify_certificate(
            &q(5, 4),
            1,
            &Certificate::PrimePowerX {
                p: nat(2),
                x_src: 2,
            },
        )
        .unwrap();
    }

    #[test]
    fn rejects_forged_window_certificate() {
        // 4/3 = I(1, 3): the window bound is not strict enough to exclude it
        let err = verify_certificate(&q(4, 3), 1, &Certificate::T1 { m: nat(3) }).unwrap_err();
        assert!(err.0.contains("not strictly below"), "got: {err}");
    }

    #[test]
    fn rejects_mismatched_parameters() {
        // wrong m for the denominator
        assert!(verify_certificate(&q(5, 4), 1, &Certificate::T1 { m: nat(8) }).is_err());
        // wrong exponent
        assert!(verify_certificate(&q(5, 4), 3, &Certificate::T1 { m: nat(4) }).is_err());
        // tampered d that does not divide σ(p_j^{k_j})
        assert!(verify_certificate(
            &q(29, 12),
            1,
            &Certificate::T2 {
                n: nat(12),
                t: nat(1),
                j: 1,
                d: nat(5),
                case: CertCase::Case2,
            },
        )
        .is_err());
        // cross-exponent certificate used at the wrong exponent
        assert!(verify_certificate(
            &q(5, 4),
            2,
            &Certificate::PrimePowerX {
                p: nat(2),
                x_src: 2,
            },
        )
        .is_err());
    }
}
