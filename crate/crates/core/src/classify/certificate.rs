//! Outlaw certificates: which rule fired and every parameter needed to
//! re-verify the proof mechanically. Serializes to a stable JSON shape with
//! all integers as decimal strings.

use std::fmt;

use serde_json::{json, Value};

use crate::natural::Natural;

/// Which of the two acceptance clauses a `T2` certificate used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertCase {
    /// `I(x, p_j^{k_j}) · I(x, d) > q` and `gcd(d^x, t) = 1`.
    Case1,
    /// `gcd(d^x, n^x · t) = 1`.
    Case2,
}

impl CertCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertCase::Case1 => "1",
            CertCase::Case2 => "2",
        }
    }
}

/// A machine-checkable proof that a rational is an x-th abundancy outlaw.
///
/// Prime indices (`j`) are 1-based positions into the ascending prime
/// factorization of `n`, matching the wire format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Window rule: denominator is `m^x` and the numerator lies strictly
    /// between `m^x` and `σ_x(m)`.
    T1 { m: Natural },
    /// Surplus rule: the value is `(σ_x(n) + t)/n^x` and the prime `p_j`
    /// admits a divisor `d^x` of `σ_x(p_j^{k_j})` satisfying `case`.
    T2 {
        n: Natural,
        t: Natural,
        j: usize,
        d: Natural,
        case: CertCase,
    },
    /// Gap rule: the denominator `l·m^x` has a divisor `n^x` trapping the
    /// value below every `I(x, p_i n)`, with a divisor `d^x` of
    /// `σ_x(n)·(l·m^x/n^x)` whose index reaches the `j`-th step ratio.
    T3 {
        n: Natural,
        l: Natural,
        m: Natural,
        j: usize,
        d: Natural,
    },
    /// Cross-exponent reduction: the value is `I(x_src, p)` for a prime `p`
    /// and `x_src > 1`, certified at exponent one through the window rule
    /// with `m = p^{x_src}`.
    PrimePowerX { p: Natural, x_src: u32 },
}

impl Certificate {
    pub fn theorem_tag(&self) -> &'static str {
        match self {
            Certificate::T1 { .. } => "T1",
            Certificate::T2 { .. } => "T2",
            Certificate::T3 { .. } => "T3",
            Certificate::PrimePowerX { .. } => "PrimePowerX",
        }
    }

    fn params_json(&self) -> Value {
        match self {
            Certificate::T1 { m } => json!({ "m": m.to_string() }),
            Certificate::T2 { n, t, j, d, case } => json!({
                "n": n.to_string(),
                "t": t.to_string(),
                "j": j.to_string(),
                "d": d.to_string(),
                "case": case.as_str(),
            }),
            Certificate::T3 { n, l, m, j, d } => json!({
                "n": n.to_string(),
                "l": l.to_string(),
                "m": m.to_string(),
                "j": j.to_string(),
                "d": d.to_string(),
            }),
            Certificate::PrimePowerX { p, x_src } => json!({
                "p": p.to_string(),
                "x_src": x_src.to_string(),
            }),
        }
    }

    /// `{"verdict":"outlaw","theorem":"T2","params":{...}}`
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": "outlaw",
            "theorem": self.theorem_tag(),
            "params": self.params_json(),
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::T1 { m } => write!(f, "T1(m={m})"),
            Certificate::T2 { n, t, j, d, case } => {
                write!(f, "T2(n={n}, t={t}, j={j}, d={d}, case={})", case.as_str())
            }
            Certificate::T3 { n, l, m, j, d } => {
                write!(f, "T3(n={n}, l={l}, m={m}, j={j}, d={d})")
            }
            Certificate::PrimePowerX { p, x_src } => {
                write!(f, "PrimePowerX(p={p}, x_src={x_src})")
            }
        }
    }
}
