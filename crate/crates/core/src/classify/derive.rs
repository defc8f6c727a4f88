//! Index-propagation rules: deriving new attained values from known ones,
//! cross-exponent prime classifications, and the odd-perfect criterion
//! target.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::classify::certificate::Certificate;
use crate::divisor::{abundancy, abundancy_fact, sigma_x};
use crate::error::{Error, Result};
use crate::factor::Factorization;
use crate::natural::{nat, Natural};
use crate::primality::is_prime;
use crate::rational::PositiveRational;

/// `(σ_x(n) + t) / n^x`, reduced.
pub fn surplus_fraction(n: &Natural, t: &Natural, x: u32) -> Result<PositiveRational> {
    if n.is_zero() || t.is_zero() {
        return Err(Error::domain("surplus fraction arguments must be positive"));
    }
    let f = crate::factor::factorize(n)?;
    PositiveRational::new(sigma_x(&f, x)? + t, n.pow(x))
}

/// A value propagated down from a known witness, with the witness that
/// attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedIndex {
    pub value: PositiveRational,
    pub witness: Natural,
}

/// Outcome of a propagation attempt: either the derived value or the name
/// of the hypothesis that failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeriveOutcome {
    Derived(DerivedIndex),
    NotApplicable(String),
}

impl DeriveOutcome {
    pub fn derived(self) -> Option<DerivedIndex> {
        match self {
            DeriveOutcome::Derived(d) => Some(d),
            DeriveOutcome::NotApplicable(_) => None,
        }
    }
}

/// Downward propagation: if `q = I(x, witness)`, `d^x` divides the
/// denominator of `q`, and `I(x, p_i·d) > q` for every prime `p_i` of `d`,
/// then `(d^x/σ_x(d))·q` is attained as well — by `witness/d`, which is
/// returned alongside the value.
pub fn derive_index(
    q: &PositiveRational,
    x: u32,
    witness: &Natural,
    d: &Factorization,
) -> Result<DeriveOutcome> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    if abundancy(x, witness)? != *q {
        return Ok(DeriveOutcome::NotApplicable(format!(
            "witness {witness} does not attain the value"
        )));
    }
    let d_val = d.value();
    let dx = d.value_pow(x);
    if !(q.den() % &dx).is_zero() {
        return Ok(DeriveOutcome::NotApplicable(format!(
            "{d_val}^{x} does not divide the denominator"
        )));
    }
    for i in 0..d.distinct_primes() {
        let grown = abundancy_fact(&d.bump_index(i), x)?;
        if grown <= *q {
            return Ok(DeriveOutcome::NotApplicable(format!(
                "I({x}, {}·{d_val}) = {grown} is not greater than the value",
                d.prime(i)
            )));
        }
    }
    let transfer = PositiveRational::new(dx, sigma_x(d, x)?)?;
    let value = &transfer * q;
    // d^x | den(q) | witness^x forces d | witness.
    let (reduced_witness, rem) = witness.div_rem(&d_val);
    if !rem.is_zero() {
        return Err(Error::domain(format!(
            "internal: {d_val} does not divide witness {witness}"
        )));
    }
    Ok(DeriveOutcome::Derived(DerivedIndex {
        value,
        witness: reduced_witness,
    }))
}

/// Outcome of the surplus-transfer implication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorollaryOutcome {
    /// `premise` attained implies `target` attained.
    Implied {
        premise: PositiveRational,
        target: PositiveRational,
    },
    NotApplicable(String),
}

/// Surplus transfer: when `(σ_x(mn) + σ_x(m)t)/(mn)^x` is in lowest terms
/// and sits below `I(x, p_i·m)` for every prime of `m`, that fraction being
/// attained implies `(σ_x(n) + t)/n^x` is attained.
pub fn corollary_transform(
    m: &Factorization,
    n: &Natural,
    t: &Natural,
    x: u32,
) -> Result<CorollaryOutcome> {
    if n.is_zero() || t.is_zero() {
        return Err(Error::domain("transform arguments must be positive"));
    }
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    let m_val = m.value();
    if !m_val.gcd(n).is_one() {
        return Ok(CorollaryOutcome::NotApplicable(format!(
            "gcd({m_val}, {n}) must be 1"
        )));
    }
    let mn = &m_val * n;
    let mn_fact = crate::factor::factorize(&mn)?;
    let numerator = sigma_x(&mn_fact, x)? + sigma_x(m, x)? * t;
    let denominator = mn.pow(x);
    if !numerator.gcd(&denominator).is_one() {
        return Ok(CorollaryOutcome::NotApplicable(format!(
            "({numerator})/({denominator}) is not in lowest terms"
        )));
    }
    let premise = PositiveRational::new(numerator, denominator)?;
    for i in 0..m.distinct_primes() {
        let grown = abundancy_fact(&m.bump_index(i), x)?;
        if grown <= premise {
            return Ok(CorollaryOutcome::NotApplicable(format!(
                "I({x}, {}·{m_val}) = {grown} does not exceed the premise {premise}",
                m.prime(i)
            )));
        }
    }
    let target = surplus_fraction(n, t, x)?;
    Ok(CorollaryOutcome::Implied { premise, target })
}

/// Cross-exponent classification of `I(x, p)` for a prime `p` and `x > 1`:
/// the value `(1 + p^x)/p^x` is attained at exponent `x` (witness `p`) but
/// is an outlaw at exponent one, because `p^x < 1 + p^x < σ(p^x)`.
#[derive(Clone, Debug)]
pub struct PrimePowerCross {
    pub value: PositiveRational,
    /// Window certificate at exponent one, with `m = p^x`.
    pub outlaw_at_1: Certificate,
    /// The same fact recorded as a cross-exponent reduction.
    pub reduction: Certificate,
    /// Witness at exponent `x`.
    pub index_witness: Natural,
}

pub fn prime_power_cross(p: &Natural, x: u32) -> Result<PrimePowerCross> {
    if x <= 1 {
        return Err(Error::domain(
            "cross-classification needs x > 1; at x = 1 the value is attained by the prime itself",
        ));
    }
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let px = p.pow(x);
    let value = PositiveRational::new(&px + 1u32, px.clone())?;
    Ok(PrimePowerCross {
        value,
        outlaw_at_1: Certificate::T1 { m: px },
        reduction: Certificate::PrimePowerX {
            p: p.clone(),
            x_src: x,
        },
        index_witness: p.clone(),
    })
}

/// The odd-perfect criterion target `2p^α(p-1)/(p^{α+1}-1)`, defined for a
/// prime `p ≡ 1 (mod 4)` and `α ≡ 1 (mod 4)`. An `n` with `I(1, n)` equal
/// to this target and `p ∤ n` would make `p^α·n` an odd perfect number.
pub fn odd_perfect_target(p: &Natural, alpha: &Natural) -> Result<PositiveRational> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let four = nat(4);
    if p % &four != Natural::one() {
        return Err(Error::domain(format!("{p} is not congruent to 1 mod 4")));
    }
    if alpha % &four != Natural::one() {
        return Err(Error::domain(format!(
            "{alpha} is not congruent to 1 mod 4"
        )));
    }
    let alpha_u32 = alpha
        .to_u32()
        .ok_or_else(|| Error::domain("alpha is too large"))?;
    let numerator = nat(2) * p.pow(alpha_u32) * (p - 1u32);
    let denominator = p.pow(alpha_u32 + 1) - 1u32;
    PositiveRational::new(numerator, denominator)
}

/// Result of checking a concrete `n` against the odd-perfect criterion.
#[derive(Clone, Debug)]
pub struct OddPerfectCheck {
    pub target: PositiveRational,
    pub index_matches: bool,
    pub p_divides_n: bool,
}

impl OddPerfectCheck {
    /// True only when `n` actually satisfies the criterion — which would
    /// mean an odd perfect number exists. Handle loudly.
    pub fn satisfied(&self) -> bool {
        self.index_matches && !self.p_divides_n
    }
}

pub fn odd_perfect_check(n: &Natural, p: &Natural, alpha: &Natural) -> Result<OddPerfectCheck> {
    if n.is_zero() {
        return Err(Error::domain("n must be positive"));
    }
    let target = odd_perfect_target(p, alpha)?;
    let index_matches = abundancy(1, n)? == target;
    let p_divides_n = (n % p).is_zero();
    Ok(OddPerfectCheck {
        target,
        index_matches,
        p_divides_n,
    })
}
