//! Arbitrary-precision non-negative integers and small helpers.
//!
//! All integer quantities in this crate are [`Natural`] values; arithmetic is
//! exact at any size the test corpus reaches (e.g. `2^89 * (2^89 - 1)` raised
//! to small powers).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;

/// Shorthand constructor from a machine word.
pub fn nat(v: u64) -> Natural {
    Natural::from(v)
}

/// Parse a decimal string into a `Natural`. Rejects signs, whitespace and
/// anything that is not a plain digit run.
pub fn parse_natural(s: &str) -> Result<Natural> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(format!("not a decimal natural number: {s:?}")));
    }
    s.parse::<BigUint>()
        .map_err(|e| Error::parse(format!("invalid natural {s:?}: {e}")))
}

pub fn gcd_nat(a: &Natural, b: &Natural) -> Natural {
    a.gcd(b)
}

pub fn lcm_nat(a: &Natural, b: &Natural) -> Natural {
    a.lcm(b)
}

pub fn is_zero(n: &Natural) -> bool {
    n.is_zero()
}

pub fn is_one(n: &Natural) -> bool {
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_natural("").is_err());
        assert!(parse_natural("-3").is_err());
        assert!(parse_natural("1 2").is_err());
        assert!(parse_natural("0x10").is_err());
        assert_eq!(parse_natural("12").unwrap(), nat(12));
        assert_eq!(parse_natural("0").unwrap(), nat(0));
    }

    #[test]
    fn big_values_round_trip() {
        let m89 = (Natural::one() << 89u32) - Natural::one();
        let huge = (&m89 << 89u32) * &m89; // far beyond u128
        assert_eq!(parse_natural(&huge.to_string()).unwrap(), huge);
    }
}
