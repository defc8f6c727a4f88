//! On-disk cache for image tables.
//!
//! One file per `(x, bound)` key, named `image-x{x}-b{bound}.tsv`. The
//! format is line-oriented UTF-8 with LF endings: a header line
//! `#abundancy-image v1`, then one record per line,
//! `x<TAB>num/den<TAB>witness`, sorted by witness. Files are written by
//! appending new records after the ones carried over from a smaller cached
//! bound, so extending a table reuses all prior work.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::natural::{parse_natural, Natural};
use crate::oracle::image::{enumerate_range, ImageTable};
use crate::oracle::sieve::DivisorSieve;
use crate::rational::PositiveRational;

pub const CACHE_HEADER: &str = "#abundancy-image v1";

/// Environment variable overriding the cache directory.
pub const CACHE_ENV_VAR: &str = "ABUNDANCY_CACHE_DIR";

/// How a cached request was satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    /// Loaded a file with exactly the requested bound.
    Hit,
    /// Loaded a larger table and kept the entries within bound.
    Shrunk { from_bound: u64 },
    /// Extended a smaller table by scanning only the new range.
    Extended { from_bound: u64 },
    /// No usable file; enumerated from scratch.
    Miss,
}

pub struct ImageCache {
    dir: PathBuf,
}

impl ImageCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ImageCache { dir: dir.into() }
    }

    /// Resolve the cache directory: explicit choice first, then the
    /// `ABUNDANCY_CACHE_DIR` environment variable.
    pub fn resolve(explicit: Option<PathBuf>) -> Option<Self> {
        explicit
            .or_else(|| std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from))
            .map(ImageCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_path(&self, x: u32, bound: u64) -> PathBuf {
        self.dir.join(format!("image-x{x}-b{bound}.tsv"))
    }

    /// Cached bounds available for exponent `x`, ascending.
    pub fn cached_bounds(&self, x: u32) -> Vec<u64> {
        let Ok(entries) = fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        let prefix = format!("image-x{x}-b");
        let mut bounds: Vec<u64> = entries
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                let rest = name.strip_prefix(&prefix)?.strip_suffix(".tsv")?;
                rest.parse::<u64>().ok()
            })
            .collect();
        bounds.sort_unstable();
        bounds
    }

    /// Write `table` to its keyed file. Records go out sorted by witness,
    /// so extending a smaller table reproduces its rows verbatim with the
    /// new records appended after them.
    pub fn store(&self, table: &ImageTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.file_path(table.x(), table.bound());
        let tmp = path.with_extension("tsv.tmp");
        {
            let mut file = std::io::BufWriter::new(fs::File::create(&tmp)?);
            writeln!(file, "{CACHE_HEADER}")?;
            for (value, witness) in table.by_witness() {
                writeln!(
                    file,
                    "{}\t{}\t{}",
                    table.x(),
                    value.to_fraction_string(),
                    witness
                )?;
            }
            file.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Load the file for exactly `(x, bound)`.
    pub fn load(&self, x: u32, bound: u64) -> Result<ImageTable> {
        let path = self.file_path(x, bound);
        let text = fs::read_to_string(&path)?;
        parse_table(&text, x, bound).map_err(|e| {
            Error::Cache(format!("{}: {e}", path.display()))
        })
    }

    /// Produce the image table for `(x, bound)`, reusing cached work:
    /// exact file, a larger file filtered down, or a smaller file extended
    /// by scanning only `(old_bound, bound]`. Freshly computed tables are
    /// stored back.
    pub fn load_or_enumerate(&self, x: u32, bound: u64) -> Result<(ImageTable, CacheOutcome)> {
        if bound == 0 {
            return Err(Error::domain("bound must be positive"));
        }
        let bounds = self.cached_bounds(x);
        if bounds.contains(&bound) {
            return Ok((self.load(x, bound)?, CacheOutcome::Hit));
        }
        if let Some(&bigger) = bounds.iter().find(|&&b| b > bound) {
            let table = self.load(x, bigger)?;
            let entries: BTreeMap<PositiveRational, Natural> = table
                .iter()
                .filter(|(_, w)| w.to_u64().map_or(false, |w| w <= bound))
                .map(|(q, w)| (q.clone(), w.clone()))
                .collect();
            return Ok((
                ImageTable::from_entries(x, bound, entries),
                CacheOutcome::Shrunk { from_bound: bigger },
            ));
        }
        let sieve = DivisorSieve::new(bound);
        if let Some(&smaller) = bounds.iter().rev().find(|&&b| b < bound) {
            let base = self.load(x, smaller)?;
            let known: std::collections::HashSet<PositiveRational> =
                base.iter().map(|(q, _)| q.clone()).collect();
            let fresh = enumerate_range(x, smaller + 1, bound, &sieve, |q| known.contains(q))?;
            let mut entries: BTreeMap<PositiveRational, Natural> =
                base.iter().map(|(q, w)| (q.clone(), w.clone())).collect();
            entries.extend(fresh);
            let table = ImageTable::from_entries(x, bound, entries);
            self.store(&table)?;
            return Ok((table, CacheOutcome::Extended { from_bound: smaller }));
        }
        let entries = enumerate_range(x, 1, bound, &sieve, |_| false)?;
        let table = ImageTable::from_entries(x, bound, entries);
        self.store(&table)?;
        Ok((table, CacheOutcome::Miss))
    }
}

fn parse_table(text: &str, x: u32, bound: u64) -> Result<ImageTable> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CACHE_HEADER => {}
        Some(other) => {
            return Err(Error::Cache(format!(
                "unexpected header {other:?} (wanted {CACHE_HEADER:?})"
            )))
        }
        None => return Err(Error::Cache("empty cache file".into())),
    }
    let mut entries: BTreeMap<PositiveRational, Natural> = BTreeMap::new();
    let mut last_witness: Option<Natural> = None;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(x_str), Some(value_str), Some(witness_str), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::Cache(format!("line {}: malformed record", lineno + 2)));
        };
        let record_x: u32 = x_str
            .parse()
            .map_err(|_| Error::Cache(format!("line {}: bad exponent", lineno + 2)))?;
        if record_x != x {
            return Err(Error::Cache(format!(
                "line {}: exponent {record_x} does not match file key {x}",
                lineno + 2
            )));
        }
        let value = PositiveRational::from_str(value_str)
            .map_err(|e| Error::Cache(format!("line {}: {e}", lineno + 2)))?;
        let witness = parse_natural(witness_str)
            .map_err(|e| Error::Cache(format!("line {}: {e}", lineno + 2)))?;
        if witness.to_u64().map_or(true, |w| w == 0 || w > bound) {
            return Err(Error::Cache(format!(
                "line {}: witness {witness} outside 1..={bound}",
                lineno + 2
            )));
        }
        if let Some(prev) = &last_witness {
            if witness <= *prev {
                return Err(Error::Cache(format!(
                    "line {}: records are not sorted by witness",
                    lineno + 2
                )));
            }
        }
        last_witness = Some(witness.clone());
        if entries.insert(value, witness).is_some() {
            return Err(Error::Cache(format!(
                "line {}: duplicate value",
                lineno + 2
            )));
        }
    }
    Ok(ImageTable::from_entries(x, bound, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::image_enumerate;

    #[test]
    fn store_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ImageCache::new(dir.path());
        let table = image_enumerate(1, 200).unwrap();
        let path = cache.store(&table).unwrap();
        assert_eq!(path.file_name().unwrap(), "image-x1-b200.tsv");

        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CACHE_HEADER));
        let first = lines.next().unwrap();
        assert_eq!(first, "1\t1/1\t1");

        let loaded = cache.load(1, 200).unwrap();
        assert_eq!(loaded.len(), table.len());
        for (q, w) in table.iter() {
            assert_eq!(loaded.witness(q), Some(w));
        }
    }

    #[test]
    fn incremental_paths() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ImageCache::new(dir.path());

        let (t1, outcome) = cache.load_or_enumerate(1, 150).unwrap();
        assert_eq!(outcome, CacheOutcome::Miss);

        let (t2, outcome) = cache.load_or_enumerate(1, 150).unwrap();
        assert_eq!(outcome, CacheOutcome::Hit);
        assert_eq!(t1.len(), t2.len());

        let (t3, outcome) = cache.load_or_enumerate(1, 400).unwrap();
        assert_eq!(outcome, CacheOutcome::Extended { from_bound: 150 });
        let direct = image_enumerate(1, 400).unwrap();
        assert_eq!(t3.len(), direct.len());
        for (q, w) in direct.iter() {
            assert_eq!(t3.witness(q), Some(w), "value {q}");
        }

        let (t4, outcome) = cache.load_or_enumerate(1, 100).unwrap();
        assert_eq!(outcome, CacheOutcome::Shrunk { from_bound: 150 });
        let direct = image_enumerate(1, 100).unwrap();
        assert_eq!(t4.len(), direct.len());
        for (q, w) in direct.iter() {
            assert_eq!(t4.witness(q), Some(w), "value {q}");
        }
    }

    #[test]
    fn rejects_corrupt_files() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ImageCache::new(dir.path());
        fs::create_dir_all(dir.path()).unwrap();

        fs::write(cache.file_path(1, 10), "#wrong header\n").unwrap();
        assert!(cache.load(1, 10).is_err());

        fs::write(
            cache.file_path(1, 20),
            format!("{CACHE_HEADER}\n2\t3/2\t2\n"),
        )
        .unwrap();
        assert!(cache.load(1, 20).is_err(), "exponent mismatch must fail");

        fs::write(
            cache.file_path(1, 30),
            format!("{CACHE_HEADER}\n1\t3/2\t2\n1\t4/3\t2\n"),
        )
        .unwrap();
        assert!(cache.load(1, 30).is_err(), "unsorted witnesses must fail");
    }

    #[test]
    fn env_var_resolution() {
        assert!(ImageCache::resolve(Some(PathBuf::from("/tmp/x"))).is_some());
        // explicit beats everything; absence of both yields None when the
        // variable is unset (not guaranteed in every environment, so only
        // the explicit case is asserted here)
        let c = ImageCache::resolve(Some(PathBuf::from("/tmp/x"))).unwrap();
        assert_eq!(c.dir(), Path::new("/tmp/x"));
    }
}
