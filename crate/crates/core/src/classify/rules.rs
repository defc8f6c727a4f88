//! Certifying rules behind a common trait, registered by name and applied
//! in registry order. Each rule inspects the shape of the queried fraction
//! and, when its hypotheses fit, produces a certificate for the independent
//! checker.

use num_traits::One;

use crate::classify::certificate::Certificate;
use crate::classify::checks::{certify_t1, certify_t2, certify_t3};
use crate::classify::EffortBudget;
use crate::divisor::sigma_x;
use crate::error::{Error, Result};
use crate::factor::{factorize, xth_power_split};
use crate::natural::nat;
use crate::rational::PositiveRational;

/// A strategy that can certify a rational as an x-th abundancy outlaw.
///
/// Implementations must be pure: same inputs, same certificate. `notes`
/// collects human-readable remarks (near misses, capped searches) that the
/// pipeline surfaces to the caller.
pub trait OutlawRule: Send + Sync {
    /// Stable registry key; also the tag selectable from the command line.
    fn name(&self) -> &'static str;

    /// One-line description of the certifying condition.
    fn summary(&self) -> &'static str;

    fn try_certify(
        &self,
        q: &PositiveRational,
        x: u32,
        effort: &EffortBudget,
        notes: &mut Vec<String>,
    ) -> Result<Option<Certificate>>;
}

/// Window rule (`t1`): denominator is a perfect x-th power `m^x` and the
/// numerator falls strictly between `m^x` and `σ_x(m)`.
pub struct SigmaWindowRule;

impl OutlawRule for SigmaWindowRule {
    fn name(&self) -> &'static str {
        "t1"
    }

    fn summary(&self) -> &'static str {
        "numerator strictly between m^x and σ_x(m) over denominator m^x"
    }

    fn try_certify(
        &self,
        q: &PositiveRational,
        x: u32,
        _effort: &EffortBudget,
        _notes: &mut Vec<String>,
    ) -> Result<Option<Certificate>> {
        let split = xth_power_split(q.den(), x)?;
        if !split.c.is_one() {
            return Ok(None);
        }
        certify_t1(q.num(), &split.b, x)
    }
}

/// Surplus rule (`t2`): denominator is `m^x` and the numerator is
/// `σ_x(m) + t` for a small surplus `t`.
pub struct SigmaSurplusRule;

impl OutlawRule for SigmaSurplusRule {
    fn name(&self) -> &'static str {
        "t2"
    }

    fn summary(&self) -> &'static str {
        "numerator is σ_x(m) + t over denominator m^x, with a qualifying divisor d^x"
    }

    fn try_certify(
        &self,
        q: &PositiveRational,
        x: u32,
        effort: &EffortBudget,
        notes: &mut Vec<String>,
    ) -> Result<Option<Certificate>> {
        let split = xth_power_split(q.den(), x)?;
        if !split.c.is_one() || split.b.is_one() {
            return Ok(None);
        }
        let m_fact = factorize(&split.b)?;
        let sigma = sigma_x(&m_fact, x)?;
        if *q.num() <= sigma {
            return Ok(None);
        }
        let t = q.num() - &sigma;
        if t > nat(effort.t_max) {
            notes.push(format!(
                "surplus t = {t} exceeds the configured search limit {}",
                effort.t_max
            ));
            return Ok(None);
        }
        certify_t2(&m_fact, &t, x, effort.divisor_enum_cap)
    }
}

/// Gap rule (`t3`): searches denominators `l·m^x` for a divisor `n^x` that
/// traps the value below every `I(x, p_i·n)` while a divisor `d^x` of
/// `σ_x(n)·(l·m^x/n^x)` reaches a step ratio.
pub struct IndexGapRule;

impl OutlawRule for IndexGapRule {
    fn name(&self) -> &'static str {
        "t3"
    }

    fn summary(&self) -> &'static str {
        "denominator l·m^x with a trapping divisor n^x and a ratio-reaching d^x"
    }

    fn try_certify(
        &self,
        q: &PositiveRational,
        x: u32,
        effort: &EffortBudget,
        _notes: &mut Vec<String>,
    ) -> Result<Option<Certificate>> {
        let split = xth_power_split(q.den(), x)?;
        certify_t3(q.num(), &split.c, &split.b, x, effort.divisor_enum_cap)
    }
}

/// Ordered collection of certifying rules. Lookup is by name; application
/// order is registration order.
pub struct RuleRegistry {
    rules: Vec<Box<dyn OutlawRule>>,
}

impl RuleRegistry {
    pub fn empty() -> Self {
        RuleRegistry { rules: Vec::new() }
    }

    /// The full rule set in default pipeline order: t1, t2, t3.
    pub fn standard() -> Self {
        let mut reg = RuleRegistry::empty();
        reg.register(Box::new(SigmaWindowRule));
        reg.register(Box::new(SigmaSurplusRule));
        reg.register(Box::new(IndexGapRule));
        reg
    }

    pub fn register(&mut self, rule: Box<dyn OutlawRule>) {
        self.rules.push(rule);
    }

    pub fn get(&self, name: &str) -> Option<&dyn OutlawRule> {
        self.rules
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
    }

    /// Build a registry from a comma-separated selection, e.g. `"t1,t3"`.
    /// Order is preserved; unknown names are an error.
    pub fn from_selection(selection: &str) -> Result<Self> {
        let mut reg = RuleRegistry::empty();
        for name in selection.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let rule: Box<dyn OutlawRule> = match name {
                "t1" => Box::new(SigmaWindowRule),
                "t2" => Box::new(SigmaSurplusRule),
                "t3" => Box::new(IndexGapRule),
                other => {
                    return Err(Error::domain(format!(
                        "unknown rule {other:?} (available: t1, t2, t3)"
                    )))
                }
            };
            if reg.get(name).is_some() {
                return Err(Error::domain(format!("rule {name:?} selected twice")));
            }
            reg.register(rule);
        }
        if reg.rules.is_empty() {
            return Err(Error::domain("rule selection is empty"));
        }
        Ok(reg)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn OutlawRule> {
        self.rules.iter().map(|r| r.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.rules.iter().map(|r| r.name()).collect()
    }
}

impl Default for RuleRegistry {
    fn default() -> Self {
        RuleRegistry::standard()
    }
}
