//! Brute-force ground truth: exhaustive witness search, image enumeration,
//! and the consistency audit that machine-checks every certificate at desk
//! scale.

pub mod cache;
pub mod image;
pub mod sieve;

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;

use crate::classify::{verify_certificate, Classification, Verdict};
use crate::divisor::abundancy;
use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::natural::{nat, Natural};
use crate::rational::PositiveRational;

pub use image::{image_enumerate, image_enumerate_with, ImageTable};
pub use sieve::DivisorSieve;

/// Outcome of an exhaustive witness search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub q: PositiveRational,
    pub x: u32,
    pub bound: u64,
    /// Smallest `n ≤ bound` with `I(x, n) = q`, when one exists.
    pub witness: Option<Natural>,
    pub elapsed: Duration,
    /// Candidates actually examined.
    pub scanned: u64,
    pub pruned: bool,
}

/// Search for the smallest witness of `q` at exponent `x`, scanning only
/// the mandatory multiples: `q` in lowest terms forces the denominator to
/// divide `witness^x`, so every witness is a multiple of the product of
/// `p^{⌈e_p/x⌉}` over the denominator's primes.
pub fn search_witness(q: &PositiveRational, x: u32, bound: u64) -> Result<SearchReport> {
    let sieve = DivisorSieve::new(bound.max(1));
    search_witness_with(q, x, bound, true, &sieve)
}

/// Search with explicit control over pruning (an unpruned scan of every
/// integer is kept available as the oracle's own oracle) and a shared sieve
/// covering at least `bound`.
pub fn search_witness_with(
    q: &PositiveRational,
    x: u32,
    bound: u64,
    prune: bool,
    sieve: &DivisorSieve,
) -> Result<SearchReport> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    if *q <= PositiveRational::one() && !q.is_one() {
        return Err(Error::domain("witness search needs q ≥ 1"));
    }
    if bound > sieve.bound() {
        return Err(Error::domain(format!(
            "bound {bound} exceeds the sieve's coverage {}",
            sieve.bound()
        )));
    }
    let start = Instant::now();

    let step: u64 = if prune {
        let den_fact = factorize(q.den())?;
        match den_fact.xth_ceil_part(x).value().to_u64() {
            Some(m) if m <= bound => m,
            // mandatory divisor already exceeds the bound: nothing to scan
            _ => {
                return Ok(SearchReport {
                    q: q.clone(),
                    x,
                    bound,
                    witness: None,
                    elapsed: start.elapsed(),
                    scanned: 0,
                    pruned: prune,
                })
            }
        }
    } else {
        1
    };

    const CHUNK: u64 = 1 << 13;
    let total = bound / step;
    let mut scanned: u64 = 0;
    let mut k0: u64 = 1;
    while k0 <= total {
        let k1 = (k0 + CHUNK - 1).min(total);
        let found = (k0..k1 + 1)
            .into_par_iter()
            .filter_map(|k| {
                let n = k * step;
                sieve.index_equals(n, x, q.num(), q.den()).then_some(n)
            })
            .min();
        scanned += k1 - k0 + 1;
        if let Some(w) = found {
            return Ok(SearchReport {
                q: q.clone(),
                x,
                bound,
                witness: Some(nat(w)),
                elapsed: start.elapsed(),
                scanned,
                pruned: prune,
            });
        }
        k0 = k1 + 1;
    }
    Ok(SearchReport {
        q: q.clone(),
        x,
        bound,
        witness: None,
        elapsed: start.elapsed(),
        scanned,
        pruned: prune,
    })
}

/// A consistency failure found by the audit. Violations are data: any
/// violation fails the build.
#[derive(Clone, Debug)]
pub struct Violation {
    pub q: PositiveRational,
    pub x: u32,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug)]
pub enum ViolationKind {
    /// A certified outlaw is attained within the audited bound.
    OutlawHasWitness { witness: Natural },
    /// The certificate itself fails re-verification.
    CertificateRejected { reason: String },
    /// An index verdict whose witness does not attain the value.
    IndexWitnessWrong {
        witness: Natural,
        actual: PositiveRational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::OutlawHasWitness { witness } => write!(
                f,
                "{} at x = {} is certified an outlaw but attained by {witness}",
                self.q, self.x
            ),
            ViolationKind::CertificateRejected { reason } => write!(
                f,
                "{} at x = {} carries an invalid certificate: {reason}",
                self.q, self.x
            ),
            ViolationKind::IndexWitnessWrong { witness, actual } => write!(
                f,
                "{} at x = {} claims witness {witness}, which attains {actual} instead",
                self.q, self.x
            ),
        }
    }
}

/// Audit a corpus of classifications against brute force at exponent `x`:
/// every outlaw certificate must re-verify and must have no witness up to
/// `bound`; every index witness must re-verify exactly. Entries for other
/// exponents are ignored.
pub fn consistency_audit(
    x: u32,
    bound: u64,
    corpus: &[Classification],
) -> Result<Vec<Violation>> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    if bound == 0 {
        return Err(Error::domain("bound must be positive"));
    }
    let sieve = DivisorSieve::new(bound);
    let mut violations = Vec::new();
    for item in corpus.iter().filter(|c| c.x == x) {
        match &item.verdict {
            Verdict::Index { witness } => {
                let actual = abundancy(x, witness)?;
                if actual != item.q {
                    violations.push(Violation {
                        q: item.q.clone(),
                        x,
                        kind: ViolationKind::IndexWitnessWrong {
                            witness: witness.clone(),
                            actual,
                        },
                    });
                }
            }
            Verdict::Outlaw { certificate } => {
                if let Err(err) = verify_certificate(&item.q, x, certificate) {
                    violations.push(Violation {
                        q: item.q.clone(),
                        x,
                        kind: ViolationKind::CertificateRejected {
                            reason: err.to_string(),
                        },
                    });
                }
                let report = search_witness_with(&item.q, x, bound, true, &sieve)?;
                if let Some(witness) = report.witness {
                    violations.push(Violation {
                        q: item.q.clone(),
                        x,
                        kind: ViolationKind::OutlawHasWitness { witness },
                    });
                }
            }
            Verdict::Unknown => {}
        }
    }
    Ok(violations)
}

/// One counterexample from the monotonicity fuzzer (expected: none).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCase {
    pub n: u64,
    pub k: u64,
    pub x: u32,
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub samples: u64,
    pub x_max: u32,
    pub seed: u64,
    pub counterexamples: Vec<MonotoneCase>,
}

/// Seeded fuzz of strict growth: `I(x, k·n) > I(x, n)` for every `k > 1`.
/// Draws are reproducible from the seed; counterexamples are reported, not
/// asserted.
pub fn monotonicity_fuzz(samples: u64, x_max: u32, seed: u64) -> Result<FuzzReport> {
    if x_max == 0 {
        return Err(Error::domain("x_max must be positive"));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    for _ in 0..samples {
        let n: u64 = rng.gen_range(1..=10_000);
        let k: u64 = rng.gen_range(2..=1000);
        let x: u32 = rng.gen_range(1..=x_max);
        let smaller = abundancy(x, &nat(n))?;
        let larger = abundancy(x, &nat(n * k))?;
        if larger <= smaller {
            counterexamples.push(MonotoneCase { n, k, x });
        }
    }
    Ok(FuzzReport {
        samples,
        x_max,
        seed,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, Certificate, EffortBudget};

    fn q(n: u64, d: u64) -> PositiveRational {
        PositiveRational::from_u64(n, d).unwrap()
    }

    #[test]
    fn search_named_cases() {
        let report = search_witness(&q(2, 1), 1, 10_000).unwrap();
        assert_eq!(report.witness, Some(nat(6)));

        // 8/3 is the limit of I(1, 6·2^k) — approached strictly from below
        // along that sequence, yet attained elsewhere: σ(84) = 224 = 84·8/3
        let report = search_witness(&q(8, 3), 1, 100_000).unwrap();
        assert_eq!(report.witness, Some(nat(84)));

        // 11/6 really has no attainer in range
        let report = search_witness(&q(11, 6), 1, 100_000).unwrap();
        assert_eq!(report.witness, None);
        assert!(report.scanned > 0);

        let report = search_witness(&q(25, 18), 2, 100).unwrap();
        assert_eq!(report.witness, Some(nat(6)));
    }

    #[test]
    fn search_finds_smallest_witness() {
        // I(1, n) = 2 holds at 6 and 28; the report must carry 6
        let report = search_witness(&q(2, 1), 1, 1000).unwrap();
        assert_eq!(report.witness, Some(nat(6)));
    }

    #[test]
    fn pruned_matches_unpruned() {
        let sieve = DivisorSieve::new(3000);
        let table = image_enumerate_with(1, 300, &sieve).unwrap();
        for (value, _) in table.iter() {
            let pruned = search_witness_with(value, 1, 3000, true, &sieve).unwrap();
            let full = search_witness_with(value, 1, 3000, false, &sieve).unwrap();
            assert_eq!(pruned.witness, full.witness, "value {value}");
            assert!(pruned.scanned <= full.scanned);
        }
    }

    #[test]
    fn prune_skips_impossible_denominators() {
        // denominator prime 101 exceeds the bound: no candidate exists
        let report = search_witness(&q(102, 101), 1, 50).unwrap();
        assert_eq!(report.witness, None);
        assert_eq!(report.scanned, 0);
    }

    #[test]
    fn audit_named_cases() {
        let effort = EffortBudget {
            witness_bound: 10_000,
            divisor_enum_cap: 10_000,
            t_max: 50,
        };
        let corpus = vec![
            classify(&q(5, 4), 1, &effort).unwrap(),
            classify(&q(2, 1), 1, &effort).unwrap(),
        ];
        let violations = consistency_audit(1, 10_000, &corpus).unwrap();
        assert!(violations.is_empty(), "got {violations:?}");
    }

    #[test]
    fn audit_rejects_forged_certificate() {
        // 4/3 = I(1, 3); a window certificate claiming otherwise must be
        // caught twice: invalid certificate AND witness found.
        let forged = Classification {
            q: q(4, 3),
            x: 1,
            verdict: Verdict::Outlaw {
                certificate: Certificate::T1 { m: nat(3) },
            },
            effort: EffortBudget::default(),
            notes: vec![],
        };
        let violations = consistency_audit(1, 1000, &[forged]).unwrap();
        assert_eq!(violations.len(), 2);
        assert!(violations.iter().any(|v| matches!(
            &v.kind,
            ViolationKind::OutlawHasWitness { witness } if *witness == nat(3)
        )));
        assert!(violations
            .iter()
            .any(|v| matches!(&v.kind, ViolationKind::CertificateRejected { .. })));
    }

    #[test]
    fn audit_rejects_wrong_index_witness() {
        let wrong = Classification {
            q: q(2, 1),
            x: 1,
            verdict: Verdict::Index { witness: nat(10) },
            effort: EffortBudget::default(),
            notes: vec![],
        };
        let violations = consistency_audit(1, 100, &[wrong]).unwrap();
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            &violations[0].kind,
            ViolationKind::IndexWitnessWrong { .. }
        ));
    }

    #[test]
    fn fuzz_finds_no_counterexamples() {
        let report = monotonicity_fuzz(2000, 3, 42).unwrap();
        assert_eq!(report.samples, 2000);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn fuzz_is_reproducible() {
        let a = monotonicity_fuzz(100, 2, 7).unwrap();
        let b = monotonicity_fuzz(100, 2, 7).unwrap();
        assert_eq!(a.counterexamples, b.counterexamples);
    }
}
