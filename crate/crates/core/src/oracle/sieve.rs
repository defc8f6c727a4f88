//! Smallest-prime-factor sieve backing the brute-force scans. Factoring a
//! sieved value is a walk down its prime chain; `σ_x` runs in machine words
//! with a checked-overflow escape to big integers.

use num_traits::One;

use crate::divisor::sigma_prime_power;
use crate::natural::{nat, Natural};

pub struct DivisorSieve {
    spf: Vec<u32>,
}

impl DivisorSieve {
    /// Sieve covering `1..=bound`.
    pub fn new(bound: u64) -> Self {
        assert!(bound >= 1, "sieve bound must be positive");
        assert!(
            bound <= u32::MAX as u64,
            "sieve bound {bound} exceeds the supported range"
        );
        let n = bound as usize;
        let mut spf: Vec<u32> = vec![0; n + 1];
        for (i, slot) in spf.iter_mut().enumerate() {
            *slot = i as u32;
        }
        let mut i = 2usize;
        while i * i <= n {
            if spf[i] == i as u32 {
                let mut j = i * i;
                while j <= n {
                    if spf[j] == j as u32 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        DivisorSieve { spf }
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Prime factorization of `n ≤ bound` as `(prime, exponent)` pairs in
    /// ascending prime order.
    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        debug_assert!(n >= 1 && n <= self.bound());
        let mut out = Vec::new();
        let mut n = n as usize;
        while n > 1 {
            let p = self.spf[n];
            let mut e = 0u32;
            while n > 1 && self.spf[n] == p {
                n /= p as usize;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    /// `σ_x(n)` in u128, or `None` if any intermediate overflows.
    pub fn sigma_u128(&self, n: u64, x: u32) -> Option<u128> {
        debug_assert!(x >= 1);
        let mut acc: u128 = 1;
        for (p, e) in self.factor(n) {
            let px = checked_pow_u128(p as u128, x)?;
            let mut term: u128 = 1;
            let mut power: u128 = 1;
            for _ in 0..e {
                power = power.checked_mul(px)?;
                term = term.checked_add(power)?;
            }
            acc = acc.checked_mul(term)?;
        }
        Some(acc)
    }

    /// `σ_x(n)` exactly, falling back to big integers past the word size.
    pub fn sigma(&self, n: u64, x: u32) -> Natural {
        if let Some(v) = self.sigma_u128(n, x) {
            return Natural::from(v);
        }
        self.factor(n)
            .into_iter()
            .fold(Natural::one(), |acc, (p, e)| {
                acc * sigma_prime_power(&nat(p), e, x)
            })
    }

    /// Does `I(x, n) = q_num/q_den`? The comparison cross-multiplies in
    /// u128 when it fits and in big integers otherwise; `q` must be in
    /// lowest terms but the computed index need not be reduced first.
    pub fn index_equals(&self, n: u64, x: u32, q_num: &Natural, q_den: &Natural) -> bool {
        let fast = (|| {
            use num_traits::ToPrimitive;
            let qn = q_num.to_u128()?;
            let qd = q_den.to_u128()?;
            let sigma = self.sigma_u128(n, x)?;
            let npow = checked_pow_u128(n as u128, x)?;
            Some(sigma.checked_mul(qd)? == qn.checked_mul(npow)?)
        })();
        match fast {
            Some(answer) => answer,
            None => {
                let sigma = self.sigma(n, x);
                sigma * q_den == q_num * nat(n).pow(x)
            }
        }
    }
}

pub(crate) fn checked_pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
