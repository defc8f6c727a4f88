//! The selfcheck suite: every library-level invariant exercised at desk
//! scale, plus the certificate audit. Any failure prints its counterexample
//! and flips the exit code to 1.

use abundancy_core::classify::rules::RuleRegistry;
use abundancy_core::classify::{Certificate, Classification, EffortBudget, Verdict};
use abundancy_core::divisor::{abundancy, sigma_x};
use abundancy_core::factor::{divisors, factorize, gcd_fact, lcm_fact, xth_power_split};
use abundancy_core::natural::{nat, Natural};
use abundancy_core::oracle::{
    consistency_audit, image_enumerate_with, monotonicity_fuzz, search_witness_with, DivisorSieve,
};
use abundancy_core::rational::PositiveRational;
use anyhow::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use serde_json::{json, Value};

pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub samples: u64,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, samples: u64) -> Self {
        CheckOutcome {
            name,
            passed: true,
            samples,
            detail: String::new(),
        }
    }

    fn fail(name: &'static str, samples: u64, detail: String) -> Self {
        CheckOutcome {
            name,
            passed: false,
            samples,
            detail,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples.to_string(),
            "detail": self.detail,
        })
    }
}

pub struct SelfcheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SelfcheckReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

const FUZZ_SEED: u64 = 42;

pub fn run(bound: u64, x_max: u32, inject_forged: bool) -> Result<SelfcheckReport> {
    let mut outcomes = Vec::new();
    let x_cap = x_max.min(3);

    outcomes.push(factorize_round_trip(bound.min(1_000_000)));
    outcomes.push(gcd_lcm_vs_euclid(10_000));
    outcomes.push(power_split_shape(10_000));
    outcomes.push(sigma_vs_enumeration(bound.min(10_000), x_cap)?);
    outcomes.push(multiplicativity(2_000, x_cap)?);
    outcomes.push(gcd_lcm_index_identity(bound.min(500), x_cap)?);
    outcomes.push(monotonicity(10_000, x_cap)?);
    outcomes.push(image_unit_entry(bound.min(10_000), x_max)?);
    outcomes.push(pruning_equivalence(bound.min(2_000))?);
    outcomes.push(headline_audit(bound)?);
    outcomes.push(classify_consistency(bound.min(100_000), x_cap)?);
    if inject_forged {
        outcomes.push(forged_certificate_control(bound.min(100_000))?);
    }

    Ok(SelfcheckReport { outcomes })
}

fn factorize_round_trip(bound: u64) -> CheckOutcome {
    const NAME: &str = "factorize-round-trip";
    for n in 1..=bound {
        let f = match factorize(&nat(n)) {
            Ok(f) => f,
            Err(e) => return CheckOutcome::fail(NAME, n, format!("factorize({n}): {e}")),
        };
        if f.value() != nat(n) {
            return CheckOutcome::fail(NAME, n, format!("product of factors of {n} is {}", f.value()));
        }
    }
    CheckOutcome::pass(NAME, bound)
}

fn gcd_lcm_vs_euclid(samples: u64) -> CheckOutcome {
    const NAME: &str = "gcd-lcm-vs-euclid";
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(FUZZ_SEED);
    for i in 0..samples {
        let a: u64 = rng.gen_range(1..=1_000_000_000);
        let b: u64 = rng.gen_range(1..=1_000_000_000);
        let (fa, fb) = (factorize(&nat(a)).unwrap(), factorize(&nat(b)).unwrap());
        let g = gcd_fact(&fa, &fb).value();
        let l = lcm_fact(&fa, &fb).value();
        let g_euclid = num_integer::Integer::gcd(&nat(a), &nat(b));
        if g != g_euclid || &g * &l != nat(a) * nat(b) {
            return CheckOutcome::fail(NAME, i, format!("mismatch at a={a}, b={b}"));
        }
    }
    CheckOutcome::pass(NAME, samples)
}

fn power_split_shape(samples: u64) -> CheckOutcome {
    const NAME: &str = "power-split-shape";
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(FUZZ_SEED + 1);
    for i in 0..samples {
        let den: u64 = rng.gen_range(1..=1_000_000_000);
        let x: u32 = rng.gen_range(1..=4);
        let split = xth_power_split(&nat(den), x).unwrap();
        if &split.c * split.b.pow(x) != nat(den) {
            return CheckOutcome::fail(NAME, i, format!("c·b^x ≠ den at den={den}, x={x}"));
        }
        let c_fact = factorize(&split.c).unwrap();
        if c_fact.factors().iter().any(|(_, e)| *e >= x) {
            return CheckOutcome::fail(
                NAME,
                i,
                format!("c = {} keeps an x-th power at den={den}, x={x}", split.c),
            );
        }
    }
    CheckOutcome::pass(NAME, samples)
}

fn sigma_vs_enumeration(bound: u64, x_max: u32) -> Result<CheckOutcome> {
    const NAME: &str = "sigma-closed-form-vs-enumeration";
    let mut checks = 0;
    for n in 1..=bound {
        let f = factorize(&nat(n))?;
        let divs = divisors(&f);
        for x in 1..=x_max {
            let brute: Natural = divs.iter().map(|d| d.pow(x)).sum();
            if sigma_x(&f, x)? != brute {
                return Ok(CheckOutcome::fail(
                    NAME,
                    checks,
                    format!("σ_{x}({n}) disagrees with divisor enumeration"),
                ));
            }
            checks += 1;
        }
    }
    Ok(CheckOutcome::pass(NAME, checks))
}

fn multiplicativity(samples: u64, x_max: u32) -> Result<CheckOutcome> {
    const NAME: &str = "index-multiplicativity";
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(FUZZ_SEED + 2);
    let mut done = 0;
    while done < samples {
        let a: u64 = rng.gen_range(2..=10_000);
        let b: u64 = rng.gen_range(2..=10_000);
        if num_integer::Integer::gcd(&a, &b) != 1 {
            continue;
        }
        let x: u32 = rng.gen_range(1..=x_max);
        let lhs = abundancy(x, &nat(a * b))?;
        let rhs = &abundancy(x, &nat(a))? * &abundancy(x, &nat(b))?;
        if lhs != rhs {
            return Ok(CheckOutcome::fail(
                NAME,
                done,
                format!("I({x},{a}·{b}) ≠ I({x},{a})·I({x},{b})"),
            ));
        }
        done += 1;
    }
    Ok(CheckOutcome::pass(NAME, samples))
}

fn gcd_lcm_index_identity(pair_bound: u64, x_max: u32) -> Result<CheckOutcome> {
    const NAME: &str = "gcd-lcm-index-identity";
    // I(x,a)·I(x,b) = I(x,gcd)·I(x,lcm); since gcd·lcm = a·b this reduces to
    // σ_x(a)σ_x(b) = σ_x(gcd)σ_x(lcm), checked exactly.
    let mut checks: u64 = 0;
    for x in 1..=x_max {
        let mut sigma_memo: std::collections::HashMap<u64, Natural> = std::collections::HashMap::new();
        let mut sigma = |n: u64| -> Result<Natural> {
            if let Some(v) = sigma_memo.get(&n) {
                return Ok(v.clone());
            }
            let v = sigma_x(&factorize(&nat(n))?, x)?;
            sigma_memo.insert(n, v.clone());
            Ok(v)
        };
        for a in 1..=pair_bound {
            for b in a..=pair_bound {
                let g = num_integer::Integer::gcd(&a, &b);
                let l = a / g * b;
                let lhs = sigma(a)? * sigma(b)?;
                let rhs = sigma(g)? * sigma(l)?;
                if lhs != rhs {
                    return Ok(CheckOutcome::fail(
                        NAME,
                        checks,
                        format!("identity fails at a={a}, b={b}, x={x}"),
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(CheckOutcome::pass(NAME, checks))
}

fn monotonicity(samples: u64, x_max: u32) -> Result<CheckOutcome> {
    const NAME: &str = "strict-growth-fuzz";
    let report = monotonicity_fuzz(samples, x_max, FUZZ_SEED)?;
    if let Some(case) = report.counterexamples.first() {
        return Ok(CheckOutcome::fail(
            NAME,
            samples,
            format!("I({}, {}·{}) failed to grow", case.x, case.k, case.n),
        ));
    }
    Ok(CheckOutcome::pass(NAME, samples))
}

fn image_unit_entry(bound: u64, x_max: u32) -> Result<CheckOutcome> {
    const NAME: &str = "image-unit-entry";
    let sieve = DivisorSieve::new(bound);
    let mut checks = 0;
    for x in 1..=x_max {
        let table = image_enumerate_with(x, bound, &sieve)?;
        if table.witness(&PositiveRational::one()) != Some(&nat(1)) {
            return Ok(CheckOutcome::fail(NAME, checks, format!("1 not witnessed by 1 at x={x}")));
        }
        for (value, witness) in table.iter() {
            checks += 1;
            if *witness != nat(1) && *value <= PositiveRational::one() {
                return Ok(CheckOutcome::fail(
                    NAME,
                    checks,
                    format!("value {value} ≤ 1 attained by {witness} at x={x}"),
                ));
            }
        }
        table.verify_all(&sieve).map_err(anyhow::Error::from)?;
    }
    Ok(CheckOutcome::pass(NAME, checks))
}

fn pruning_equivalence(bound: u64) -> Result<CheckOutcome> {
    const NAME: &str = "pruned-vs-unpruned-search";
    let sieve = DivisorSieve::new(bound);
    let table = image_enumerate_with(1, bound, &sieve)?;
    let mut checks = 0;
    for (value, _) in table.iter() {
        let pruned = search_witness_with(value, 1, bound, true, &sieve)?;
        let full = search_witness_with(value, 1, bound, false, &sieve)?;
        if pruned.witness != full.witness {
            return Ok(CheckOutcome::fail(
                NAME,
                checks,
                format!("disagreement on {value}: {:?} vs {:?}", pruned.witness, full.witness),
            ));
        }
        checks += 1;
    }
    Ok(CheckOutcome::pass(NAME, checks))
}

fn headline_audit(bound: u64) -> Result<CheckOutcome> {
    const NAME: &str = "headline-outlaw-audit";
    let effort = EffortBudget {
        witness_bound: bound,
        ..EffortBudget::default()
    };
    let mut corpus_x1 = Vec::new();
    for (num, den) in [(5u64, 4u64), (7, 6), (11, 6), (29, 12)] {
        let q = PositiveRational::from_u64(num, den)?;
        let c = abundancy_core::classify(&q, 1, &effort)?;
        if !matches!(c.verdict, Verdict::Outlaw { .. }) {
            return Ok(CheckOutcome::fail(NAME, 0, format!("{q} at x=1 not certified")));
        }
        corpus_x1.push(c);
    }
    let q = PositiveRational::from_u64(37, 36)?;
    let c2 = abundancy_core::classify(&q, 2, &effort)?;
    if !matches!(c2.verdict, Verdict::Outlaw { .. }) {
        return Ok(CheckOutcome::fail(NAME, 0, "37/36 at x=2 not certified".into()));
    }
    let violations = [
        consistency_audit(1, bound, &corpus_x1)?,
        consistency_audit(2, bound, &[c2])?,
    ]
    .concat();
    if let Some(v) = violations.first() {
        return Ok(CheckOutcome::fail(NAME, 5, format!("{v}")));
    }
    Ok(CheckOutcome::pass(NAME, 5))
}

fn classify_consistency(bound: u64, x_max: u32) -> Result<CheckOutcome> {
    const NAME: &str = "no-certificate-on-attained-values";
    let registry = RuleRegistry::standard();
    let effort = EffortBudget::default();
    let sieve = DivisorSieve::new(bound);
    let mut checks = 0;
    for x in 1..=x_max {
        let table = image_enumerate_with(x, bound, &sieve)?;
        for (value, witness) in table.iter() {
            if value.is_one() {
                continue;
            }
            for rule in registry.iter() {
                let mut notes = Vec::new();
                if let Some(cert) = rule.try_certify(value, x, &effort, &mut notes)? {
                    return Ok(CheckOutcome::fail(
                        NAME,
                        checks,
                        format!(
                            "rule {} certified {value} (x={x}) as {cert}, but {witness} attains it",
                            rule.name()
                        ),
                    ));
                }
            }
            checks += 1;
        }
    }
    Ok(CheckOutcome::pass(NAME, checks))
}

fn forged_certificate_control(bound: u64) -> Result<CheckOutcome> {
    const NAME: &str = "forged-certificate-control";
    // Deliberately wrong: 4/3 = I(1, 3). The audit must reject the
    // certificate and report the witness; this check "passes" only by
    // failing, exercising the auditor end to end.
    let forged = Classification {
        q: PositiveRational::from_u64(4, 3)?,
        x: 1,
        verdict: Verdict::Outlaw {
            certificate: Certificate::T1 { m: nat(3) },
        },
        effort: EffortBudget::default(),
        notes: vec!["injected negative control".into()],
    };
    let violations = consistency_audit(1, bound, &[forged])?;
    let witness_found = violations.iter().any(|v| {
        matches!(&v.kind, abundancy_core::oracle::ViolationKind::OutlawHasWitness { witness } if *witness == nat(3))
    });
    let detail = violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ");
    if witness_found {
        Ok(CheckOutcome::fail(
            NAME,
            violations.len() as u64,
            format!("auditor detected the injected forgery as intended — this run must fail: {detail}"),
        ))
    } else {
        Ok(CheckOutcome::fail(
            NAME,
            violations.len() as u64,
            "auditor MISSED the injected forgery".into(),
        ))
    }
}

pub fn render_table(report: &SelfcheckReport) -> String {
    let mut out = String::new();
    let width = report
        .outcomes
        .iter()
        .map(|o| o.name.len())
        .max()
        .unwrap_or(10)
        .max(5);
    out.push_str(&format!("{:width$}  {:6}  {:>10}  detail\n", "check", "result", "samples"));
    for o in &report.outcomes {
        out.push_str(&format!(
            "{:width$}  {:6}  {:>10}  {}\n",
            o.name,
            if o.passed { "pass" } else { "FAIL" },
            o.samples,
            o.detail
        ));
    }
    out
}
