//! Counts `|I_{n,r,a,b}|` for all `n <= 2 * max_r`, with an on-disk cache.
//!
//! Cache files are plain text, one file per `n` and bound on `r`:
//!
//! ```text
//! # meander-irreducible v1 n=3
//! 3,2,1,1,6
//! 3,2,2,0,1
//! ```
//!
//! Lines are `n,r,a,b,count`, sorted by `(n,r,a,b)`, LF terminated.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::search::{count_irreducible, IrreduciblePair, SearchOptions};
use super::{is_compatible, StatQuadruple};
use crate::error::{Error, Result};
use crate::nclat::MAX_ENUM_N;

pub const CACHE_VERSION: &str = "v1";

/// Default guard on `max_r` (irreducible data up to `n = 12`).
pub const DEFAULT_MAX_TABLE_R: usize = 6;

#[derive(Clone, Debug, Default)]
pub struct TableOptions {
    pub cache_dir: Option<PathBuf>,
    pub override_guard: bool,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub max_r: usize,
    /// Per `n`: `"computed"` or the cache file the counts were read from.
    pub sources: BTreeMap<usize, String>,
    pub created_unix: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleTable {
    entries: BTreeMap<StatQuadruple, u64>,
    // complete for every n when r <= max_r, and for every r when n <= full_n
    max_r: usize,
    full_n: usize,
    provenance: Provenance,
}

impl IrreducibleTable {
    /// Wraps explicit counts; entries with `r > max_r` are dropped and zero
    /// counts are not stored.
    pub fn from_entries(max_r: usize, entries: BTreeMap<StatQuadruple, u64>) -> Result<Self> {
        let entries: BTreeMap<_, _> = entries
            .into_iter()
            .filter(|(s, c)| s.r <= max_r && *c > 0)
            .collect();
        Self::validated(max_r, max_r + 1, entries)
    }

    /// Wraps counts that are complete in `r` for every `n <= n_max`; entries
    /// with larger `n` are dropped.
    pub fn from_complete(n_max: usize, entries: BTreeMap<StatQuadruple, u64>) -> Result<Self> {
        let entries: BTreeMap<_, _> = entries
            .into_iter()
            .filter(|(s, c)| s.n <= n_max && *c > 0)
            .collect();
        Self::validated(n_max / 2, n_max, entries)
    }

    fn validated(max_r: usize, full_n: usize, entries: BTreeMap<StatQuadruple, u64>) -> Result<Self> {
        for s in entries.keys() {
            if !is_compatible(s.n, s.r, s.a, s.b) {
                return Err(Error::StructureViolation(format!(
                    "table entry {s:?} is not a compatible quadruple"
                )));
            }
        }
        Ok(IrreducibleTable {
            entries,
            max_r,
            full_n,
            provenance: Provenance {
                max_r,
                sources: BTreeMap::new(),
                created_unix: now(),
            },
        })
    }

    pub fn entries(&self) -> &BTreeMap<StatQuadruple, u64> {
        &self.entries
    }

    pub fn get(&self, n: usize, r: usize, a: usize, b: usize) -> u64 {
        self.entries
            .get(&StatQuadruple::new(n, r, a, b))
            .copied()
            .unwrap_or(0)
    }

    pub fn max_r(&self) -> usize {
        self.max_r
    }

    /// Largest `n` whose entries are complete for every `r`.
    pub fn full_n(&self) -> usize {
        self.full_n
    }

    /// Fails unless every entry with `n <= nx` and `r <= ny` is known.
    pub fn check_coverage(&self, nx: usize, ny: usize) -> Result<()> {
        // entries with n > 2r do not exist, so only r < n <= 2r matters
        for n in self.full_n + 1..=nx {
            let r_hi = ny.min(n - 1);
            if 2 * r_hi >= n && r_hi > self.max_r {
                return Err(Error::Coverage(format!(
                    "need |I(n={n}, r={r_hi})| but the table holds r <= {} beyond n = {}",
                    self.max_r, self.full_n
                )));
            }
        }
        Ok(())
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `sum_{r,a,b} |I_{n,r,a,b}|` restricted to the table.
    pub fn total(&self, n: usize) -> u64 {
        self.entries
            .iter()
            .filter(|(s, _)| s.n == n)
            .map(|(_, c)| c)
            .sum()
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Runs the pruned search for `n = 1..=2*max_r`, reusing cache files when
/// present and writing them when computed.
pub fn build_irreducible_table(max_r: usize, opts: &TableOptions) -> Result<IrreducibleTable> {
    let limit = if opts.override_guard {
        MAX_ENUM_N / 2
    } else {
        DEFAULT_MAX_TABLE_R
    };
    if max_r > limit {
        return Err(Error::SizeLimit {
            what: "irreducible table r",
            n: max_r,
            max: limit,
        });
    }
    let mut entries = BTreeMap::new();
    let mut sources = BTreeMap::new();
    for n in 1..=(2 * max_r).max(1) {
        let bound = max_r.min(n - 1);
        let cached = match &opts.cache_dir {
            Some(dir) => find_cache(dir, n, bound)?,
            None => None,
        };
        let counts = match cached {
            Some((path, counts)) => {
                sources.insert(n, path.display().to_string());
                counts
                    .into_iter()
                    .filter(|(s, _)| s.r <= bound)
                    .collect()
            }
            None => {
                let search = SearchOptions {
                    max_r: Some(bound),
                    override_guard: opts.override_guard,
                    workers: opts.workers,
                };
                let counts = count_irreducible(n, search)?;
                if let Some(dir) = &opts.cache_dir {
                    fs::create_dir_all(dir)?;
                    write_cache_file(&dir.join(cache_file_name(n, bound)), n, &counts)?;
                }
                sources.insert(n, "computed".to_string());
                counts
            }
        };
        entries.extend(counts);
    }
    let mut table = IrreducibleTable::from_entries(max_r, entries)?;
    table.provenance.sources = sources;
    Ok(table)
}

/// Unbounded counts for every `n <= n_max`.
pub fn build_complete_table(n_max: usize, opts: &TableOptions) -> Result<IrreducibleTable> {
    let mut entries = BTreeMap::new();
    for n in 1..=n_max {
        let search = SearchOptions {
            max_r: None,
            override_guard: opts.override_guard,
            workers: opts.workers,
        };
        entries.extend(count_irreducible(n, search)?);
    }
    let mut table = IrreducibleTable::from_complete(n_max, entries)?;
    table.provenance.sources = (1..=n_max).map(|n| (n, "computed".to_string())).collect();
    Ok(table)
}

/// `irreducible_v1_n07_r06.csv`: counts on `n` points with `r <= bound`.
pub fn cache_file_name(n: usize, bound: usize) -> String {
    format!("irreducible_{CACHE_VERSION}_n{n:02}_r{bound:02}.csv")
}

fn find_cache(
    dir: &Path,
    n: usize,
    bound: usize,
) -> Result<Option<(PathBuf, BTreeMap<StatQuadruple, u64>)>> {
    // any file with a weaker bound also covers the request
    for b in bound..n.max(1) {
        let path = dir.join(cache_file_name(n, b));
        if path.is_file() {
            let counts = read_cache_file(&path, n, b)?;
            return Ok(Some((path, counts)));
        }
    }
    Ok(None)
}

fn header(n: usize) -> String {
    format!("# meander-irreducible {CACHE_VERSION} n={n}")
}

pub fn write_cache_file(path: &Path, n: usize, counts: &BTreeMap<StatQuadruple, u64>) -> Result<()> {
    let mut text = header(n);
    text.push('\n');
    for (s, c) in counts {
        text.push_str(&format!("{},{},{},{},{}\n", s.n, s.r, s.a, s.b, c));
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads and validates a cache file for `n` points with `r <= bound`.
pub fn read_cache_file(path: &Path, n: usize, bound: usize) -> Result<BTreeMap<StatQuadruple, u64>> {
    let corrupt = |reason: String| Error::Integrity {
        path: path.to_path_buf(),
        reason,
    };
    let text = fs::read_to_string(path)?;
    let mut lines = text.split('\n');
    if lines.next() != Some(header(n).as_str()) {
        return Err(corrupt("missing or wrong header".into()));
    }
    if !text.ends_with('\n') {
        return Err(corrupt("truncated (no final newline)".into()));
    }
    let mut counts = BTreeMap::new();
    let mut previous: Option<StatQuadruple> = None;
    for (k, line) in lines.enumerate() {
        let lineno = k + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<u64> = line
            .split(',')
            .map(|f| f.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| corrupt(format!("line {lineno}: not five integers")))?;
        let [qn, r, a, b, count] = fields[..] else {
            return Err(corrupt(format!("line {lineno}: not five integers")));
        };
        let s = StatQuadruple::new(qn as usize, r as usize, a as usize, b as usize);
        if s.n != n || s.r > bound || count == 0 || !is_compatible(s.n, s.r, s.a, s.b) {
            return Err(corrupt(format!("line {lineno}: impossible entry {line:?}")));
        }
        if previous.is_some_and(|p| p >= s) {
            return Err(corrupt(format!("line {lineno}: entries not sorted")));
        }
        previous = Some(s);
        counts.insert(s, count);
    }
    // (alpha, beta) -> (beta, alpha) swaps a and b
    for (s, c) in &counts {
        if counts.get(&s.swapped()) != Some(c) {
            return Err(corrupt(format!("entry {s:?} breaks the a <-> b symmetry")));
        }
    }
    Ok(counts)
}

/// Writes `n;<alpha cycles>;<beta cycles>` lines.
pub fn write_pairs_file(path: &Path, pairs: &[IrreduciblePair]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    for p in pairs {
        writeln!(out, "{};{};{}", p.stats.n, p.alpha, p.beta)?;
    }
    out.flush()?;
    Ok(())
}
