//! Exhaustive enumeration of the attained index values up to a bound: the
//! ground truth every certificate is audited against.

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::natural::Natural;
use crate::oracle::sieve::{checked_pow_u128, DivisorSieve};
use crate::rational::PositiveRational;

/// Map of every value `I(x, n)` for `n ≤ bound` to its smallest witness.
#[derive(Clone, Debug)]
pub struct ImageTable {
    x: u32,
    bound: u64,
    entries: BTreeMap<PositiveRational, Natural>,
}

impl ImageTable {
    pub(crate) fn from_entries(
        x: u32,
        bound: u64,
        entries: BTreeMap<PositiveRational, Natural>,
    ) -> Self {
        ImageTable { x, bound, entries }
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, q: &PositiveRational) -> bool {
        self.entries.contains_key(q)
    }

    pub fn witness(&self, q: &PositiveRational) -> Option<&Natural> {
        self.entries.get(q)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PositiveRational, &Natural)> {
        self.entries.iter()
    }

    /// Entries sorted by witness — the order the cache file uses.
    pub fn by_witness(&self) -> Vec<(&PositiveRational, &Natural)> {
        let mut rows: Vec<_> = self.entries.iter().collect();
        rows.sort_by(|a, b| a.1.cmp(b.1));
        rows
    }

    /// Recompute every entry from scratch. Any mismatch is an error naming
    /// the offending witness.
    pub fn verify_all(&self, sieve: &DivisorSieve) -> Result<()> {
        for (value, witness) in &self.entries {
            let w = witness
                .to_u64()
                .ok_or_else(|| Error::domain(format!("witness {witness} out of range")))?;
            if w > self.bound || w == 0 {
                return Err(Error::domain(format!(
                    "witness {w} outside the table bound {}",
                    self.bound
                )));
            }
            if !sieve.index_equals(w, self.x, value.num(), value.den()) {
                return Err(Error::domain(format!(
                    "table entry {value} is not attained by its witness {w}"
                )));
            }
        }
        Ok(())
    }
}

/// Enumerate all attained values `I(x, n)` for `n ≤ bound`, keeping the
/// smallest witness per value. Work is partitioned over disjoint ranges and
/// merged smallest-witness-first, so the result does not depend on worker
/// scheduling.
pub fn image_enumerate(x: u32, bound: u64) -> Result<ImageTable> {
    if x == 0 {
        return Err(Error::domain("exponent x must be positive"));
    }
    if bound == 0 {
        return Err(Error::domain("bound must be positive"));
    }
    let sieve = DivisorSieve::new(bound);
    image_enumerate_with(x, bound, &sieve)
}

pub fn image_enumerate_with(x: u32, bound: u64, sieve: &DivisorSieve) -> Result<ImageTable> {
    let entries = enumerate_range(x, 1, bound, sieve, |_| false)?;
    Ok(ImageTable {
        x,
        bound,
        entries,
    })
}

/// Enumerate `lo..=hi`, skipping values for which `already_known` answers
/// true (used for incremental cache extension).
pub(crate) fn enumerate_range(
    x: u32,
    lo: u64,
    hi: u64,
    sieve: &DivisorSieve,
    already_known: impl Fn(&PositiveRational) -> bool + Sync,
) -> Result<BTreeMap<PositiveRational, Natural>> {
    assert!(hi <= sieve.bound());
    const CHUNK: u64 = 1 << 14;

    let ranges: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut start = lo;
        while start <= hi {
            let end = (start + CHUNK - 1).min(hi);
            v.push((start, end));
            start = end + 1;
        }
        v
    };

    // Per-range maps keyed by the reduced (num, den) pair in machine words,
    // with a spillover list for values past u128.
    type FastMap = HashMap<(u128, u128), u64>;
    type WideList = Vec<(PositiveRational, u64)>;

    let partials: Vec<(FastMap, WideList)> = ranges
        .par_iter()
        .map(|&(start, end)| {
            let mut fast: FastMap = HashMap::new();
            let mut wide: WideList = Vec::new();
            for n in start..=end {
                let reduced = (|| {
                    let sigma = sieve.sigma_u128(n, x)?;
                    let npow = checked_pow_u128(n as u128, x)?;
                    let g = gcd_u128(sigma, npow);
                    Some((sigma / g, npow / g))
                })();
                match reduced {
                    Some(key) => {
                        fast.entry(key).or_insert(n);
                    }
                    None => {
                        let sigma = sieve.sigma(n, x);
                        let q = PositiveRational::new(sigma, Natural::from(n).pow(x))
                            .expect("index values are positive");
                        wide.push((q, n));
                    }
                }
            }
            (fast, wide)
        })
        .collect();

    // Deterministic merge in range order; the first occurrence wins, which
    // is the smallest witness because ranges ascend.
    let mut fast_merged: FastMap = HashMap::new();
    let mut wide_merged: Vec<(PositiveRational, u64)> = Vec::new();
    for (fast, wide) in partials {
        for (key, witness) in fast {
            fast_merged
                .entry(key)
                .and_modify(|w| {
                    if witness < *w {
                        *w = witness;
                    }
                })
                .or_insert(witness);
        }
        wide_merged.extend(wide);
    }

    let mut entries: BTreeMap<PositiveRational, Natural> = BTreeMap::new();
    for ((num, den), witness) in fast_merged {
        let q = PositiveRational::new(Natural::from(num), Natural::from(den))
            .expect("index values are positive");
        if already_known(&q) {
            continue;
        }
        match entries.entry(q) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(Natural::from(witness));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let nw = Natural::from(witness);
                if nw < *e.get() {
                    e.insert(nw);
                }
            }
        }
    }
    for (q, witness) in wide_merged {
        if already_known(&q) {
            continue;
        }
        match entries.entry(q) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(Natural::from(witness));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let nw = Natural::from(witness);
                if nw < *e.get() {
                    e.insert(nw);
                }
            }
        }
    }
    Ok(entries)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}
