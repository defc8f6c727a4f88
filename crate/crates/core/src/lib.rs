//! Exact arithmetic for generalized abundancy indices.
//!
//! The library computes `I(x, n) = σ_x(n) / n^x` over arbitrary-precision
//! integers, decides whether rationals greater than one are attained by the
//! index function or are provably unattainable ("outlaws", certified by
//! machine-checkable certificates), evaluates the exact limits of
//! `I(x, n·m^k)` as `k` grows, and audits every verdict against brute-force
//! enumeration.
//!
//! Entry points:
//! - [`divisor::sigma_x`], [`divisor::abundancy`] — the core functions;
//! - [`classify::classify`] — witness search plus the certifying rules,
//!   every certificate re-verified independently;
//! - [`limits::limit_general`], [`limits::even_perfect_sequence`] — exact
//!   limit values;
//! - [`oracle`] — exhaustive search, image enumeration, consistency audits.

pub mod classify;
pub mod divisor;
pub mod error;
pub mod factor;
pub mod limits;
pub mod natural;
pub mod oracle;
pub mod primality;
pub mod rational;

pub use classify::{
    classify, classify_with, CertCase, Certificate, Classification, EffortBudget, OutlawRule,
    RuleRegistry, Verdict,
};
pub use divisor::{abundancy, deficiency_class, sigma_of, sigma_x, AbundancyQuery, DeficiencyClass};
pub use error::{Error, Result};
pub use factor::{
    divisors, factorize, gcd_fact, lcm_fact, xth_power_split, Factorization, PowerSplit,
};
pub use limits::{
    coprime_split, even_perfect_sequence, limit_general, limit_prime_product, CoprimeSplit,
    EvenPerfectTerm, LimitSpec, LimitValue,
};
pub use natural::{nat, parse_natural, Natural};
pub use oracle::{
    consistency_audit, image_enumerate, monotonicity_fuzz, search_witness, DivisorSieve,
    FuzzReport, ImageTable, SearchReport, Violation,
};
pub use rational::PositiveRational;
