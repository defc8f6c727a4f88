//! Exact positive rationals in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::natural::{nat, parse_natural, Natural};

/// A strictly positive rational number, always stored in lowest terms.
///
/// Canonical form (`gcd(num, den) = 1`, both nonzero) is enforced on every
/// construction path, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PositiveRational {
    num: Natural,
    den: Natural,
}

impl PositiveRational {
    /// Build `num/den`, reducing to lowest terms. Zero numerator or
    /// denominator is a domain error.
    pub fn new(num: Natural, den: Natural) -> Result<Self> {
        if num.is_zero() {
            return Err(Error::domain("rational numerator must be positive"));
        }
        if den.is_zero() {
            return Err(Error::domain("rational denominator must be positive"));
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Ok(PositiveRational { num, den })
        } else {
            Ok(PositiveRational {
                num: num / &g,
                den: den / &g,
            })
        }
    }

    pub fn from_natural(n: Natural) -> Result<Self> {
        Self::new(n, Natural::one())
    }

    pub fn from_u64(n: u64, d: u64) -> Result<Self> {
        Self::new(nat(n), nat(d))
    }

    pub fn one() -> Self {
        PositiveRational {
            num: Natural::one(),
            den: Natural::one(),
        }
    }

    pub fn num(&self) -> &Natural {
        &self.num
    }

    pub fn den(&self) -> &Natural {
        &self.den
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    /// Compare against one without allocating.
    pub fn cmp_one(&self) -> Ordering {
        self.num.cmp(&self.den)
    }

    /// `|self - other|`, or `None` when the two values are equal (zero is not
    /// a `PositiveRational`).
    pub fn abs_diff(&self, other: &Self) -> Option<Self> {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        match lhs.cmp(&rhs) {
            Ordering::Equal => None,
            Ordering::Greater => {
                Some(Self::new(lhs - rhs, &self.den * &other.den).expect("nonzero"))
            }
            Ordering::Less => Some(Self::new(rhs - lhs, &self.den * &other.den).expect("nonzero")),
        }
    }

    /// `floor(self * 10^digits)` — the integer whose decimal expansion gives
    /// the first `digits` fractional digits of the value.
    pub fn scaled_floor(&self, digits: u32) -> Natural {
        (&self.num * nat(10).pow(digits)) / &self.den
    }

    /// Truncated decimal rendering with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let (int, rem) = self.num.div_rem(&self.den);
        if digits == 0 {
            return int.to_string();
        }
        let frac = (rem * nat(10).pow(digits)) / &self.den;
        let mut frac_str = frac.to_string();
        while (frac_str.len() as u32) < digits {
            frac_str.insert(0, '0');
        }
        format!("{int}.{frac_str}")
    }

    /// Render as `num/den` even when the value is an integer; used in wire
    /// formats that want an unambiguous fraction.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }
}

impl PartialOrd for PositiveRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PositiveRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl Mul for &PositiveRational {
    type Output = PositiveRational;

    fn mul(self, rhs: &PositiveRational) -> PositiveRational {
        // Cross-reduce before multiplying to keep intermediates small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        PositiveRational {
            num: (&self.num / &g1) * (&rhs.num / &g2),
            den: (&self.den / &g2) * (&rhs.den / &g1),
        }
    }
}

impl Div for &PositiveRational {
    type Output = PositiveRational;

    fn div(self, rhs: &PositiveRational) -> PositiveRational {
        let g1 = self.num.gcd(&rhs.num);
        let g2 = rhs.den.gcd(&self.den);
        PositiveRational {
            num: (&self.num / &g1) * (&rhs.den / &g2),
            den: (&self.den / &g2) * (&rhs.num / &g1),
        }
    }
}

impl fmt::Display for PositiveRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for PositiveRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PositiveRational {
    type Err = Error;

    /// Accepts `a/b` or a bare integer `a` (denominator one). No whitespace.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((a, b)) => PositiveRational::new(parse_natural(a)?, parse_natural(b)?),
            None => PositiveRational::from_natural(parse_natural(s)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_on_construction() {
        let q = PositiveRational::from_u64(50, 36).unwrap();
        assert_eq!(q.num(), &nat(25));
        assert_eq!(q.den(), &nat(18));
        assert!(PositiveRational::from_u64(0, 3).is_err());
        assert!(PositiveRational::from_u64(3, 0).is_err());
    }

    #[test]
    fn parsing_and_display() {
        let q: PositiveRational = "5/4".parse().unwrap();
        assert_eq!(q.to_string(), "5/4");
        let n: PositiveRational = "7".parse().unwrap();
        assert_eq!(n.to_string(), "7");
        assert!(n.is_integer());
        assert_eq!(n.to_fraction_string(), "7/1");
        assert!("5 / 4".parse::<PositiveRational>().is_err());
        assert!("5/0".parse::<PositiveRational>().is_err());
        assert!("".parse::<PositiveRational>().is_err());
        // non-reduced input reduces
        let r: PositiveRational = "6/4".parse().unwrap();
        assert_eq!(r.to_string(), "3/2");
    }

    #[test]
    fn ordering_is_cross_multiplication() {
        let a = PositiveRational::from_u64(5, 4).unwrap();
        let b = PositiveRational::from_u64(4, 3).unwrap();
        assert!(a < b);
        assert_eq!(a.cmp_one(), Ordering::Greater);
        assert_eq!(PositiveRational::one().cmp_one(), Ordering::Equal);
    }

    #[test]
    fn mul_div_stay_reduced() {
        let a = PositiveRational::from_u64(4, 3).unwrap();
        let b = PositiveRational::from_u64(3, 2).unwrap();
        assert_eq!(&a * &b, PositiveRational::from_u64(2, 1).unwrap());
        assert_eq!(&a / &b, PositiveRational::from_u64(8, 9).unwrap());
    }

    #[test]
    fn decimal_rendering() {
        let q = PositiveRational::from_u64(8, 3).unwrap();
        assert_eq!(q.to_decimal(6), "2.666666");
        assert_eq!(q.to_decimal(0), "2");
        let half_ish = PositiveRational::from_u64(101, 100).unwrap();
        assert_eq!(half_ish.to_decimal(4), "1.0100");
        assert_eq!(q.scaled_floor(3), nat(2666));
    }

    #[test]
    fn abs_diff_and_equality() {
        let a = PositiveRational::from_u64(8, 3).unwrap();
        let b = PositiveRational::from_u64(21, 8).unwrap();
        let d = a.abs_diff(&b).unwrap();
        assert_eq!(d, PositiveRational::from_u64(1, 24).unwrap());
        assert!(a.abs_diff(&a).is_none());
    }
}
