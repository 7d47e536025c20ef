//! Meandric systems as pairs of non-crossing partitions.
//!
//! A pair `(alpha, beta)` of partitions of `{1..n}` is drawn by fattening
//! `alpha` above a horizontal line and `beta` below it; the resulting closed
//! curves cross the line at `2n` points. The number of curves equals the
//! number of cycles of `alpha * beta^{-1}`.

mod search;
mod table;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nclat::{enumerate_nc, perm_product_cycles, NcPartition};

pub use search::{
    count_irreducible, enumerate_irreducible, IrreduciblePair, SearchOptions,
    DEFAULT_MAX_IRREDUCIBLE_N,
};
pub use table::{
    build_complete_table, build_irreducible_table, cache_file_name, read_cache_file, write_cache_file, write_pairs_file,
    IrreducibleTable, Provenance, TableOptions, CACHE_VERSION, DEFAULT_MAX_TABLE_R,
};

/// Guard for [`brute_meander_counts`].
pub const MAX_BRUTE_MEANDER_N: usize = 9;
/// Guard for [`brute_set_counts`].
pub const MAX_BRUTE_SET_N: usize = 8;

/// The statistics `(n, r, a, b)` of a pair of partitions.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct StatQuadruple {
    pub n: usize,
    pub r: usize,
    pub a: usize,
    pub b: usize,
}

impl StatQuadruple {
    pub fn new(n: usize, r: usize, a: usize, b: usize) -> Self {
        StatQuadruple { n, r, a, b }
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.r, self.a, self.b)
    }

    pub fn swapped(&self) -> Self {
        StatQuadruple::new(self.n, self.r, self.b, self.a)
    }
}

/// A meandric system with its loop count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeandricSystem {
    alpha: NcPartition,
    beta: NcPartition,
    loops: usize,
}

impl MeandricSystem {
    pub fn new(alpha: NcPartition, beta: NcPartition) -> Result<Self> {
        let loops = loop_count_algebraic(&alpha, &beta)?;
        Ok(MeandricSystem { alpha, beta, loops })
    }

    pub fn alpha(&self) -> &NcPartition {
        &self.alpha
    }

    pub fn beta(&self) -> &NcPartition {
        &self.beta
    }

    pub fn n(&self) -> usize {
        self.alpha.n()
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    /// The closed curves as sequences of positions on the line (`2i` is
    /// `i-`, `2i+1` is `i+`), each starting at its leftmost point and
    /// leaving it along the upper arc.
    pub fn trace_loops(&self) -> Vec<Vec<usize>> {
        trace(&self.alpha, &self.beta)
    }
}

/// `#(alpha * beta^{-1})`.
pub fn loop_count_algebraic(alpha: &NcPartition, beta: &NcPartition) -> Result<usize> {
    perm_product_cycles(alpha, beta)
}

/// Counts curves by walking the fattened arcs: upper arcs from `alpha`,
/// lower arcs from `beta`, alternating until the walk returns.
pub fn loop_count_geometric(alpha: &NcPartition, beta: &NcPartition) -> Result<usize> {
    Error::check_same_n(alpha.n(), beta.n())?;
    Ok(trace(alpha, beta).len())
}

fn trace(alpha: &NcPartition, beta: &NcPartition) -> Vec<Vec<usize>> {
    let upper = alpha.fatten();
    let lower = beta.fatten();
    let points = 2 * alpha.n();
    let mut seen = vec![false; points];
    let mut loops = Vec::new();
    for start in 0..points {
        if seen[start] {
            continue;
        }
        let mut curve = Vec::new();
        let mut p = start;
        loop {
            seen[p] = true;
            curve.push(p);
            let q = upper.partner(p);
            seen[q] = true;
            curve.push(q);
            p = lower.partner(q);
            if p == start {
                break;
            }
        }
        loops.push(curve);
    }
    loops
}

/// `(n, |alpha^{-1} beta|, |alpha|, |beta|)`.
pub fn stats_i(alpha: &NcPartition, beta: &NcPartition) -> Result<StatQuadruple> {
    let n = alpha.n();
    let r = n - perm_product_cycles(alpha, beta)?;
    Ok(StatQuadruple::new(n, r, alpha.length(), beta.length()))
}

/// `(n, |alpha^{-1} beta|, |alpha^{-1} sigma|, |beta^{-1} sigma|)` with
/// `sigma` the join. Both partitions lie below `sigma`, so the distances are
/// differences of lengths.
pub fn stats_m(alpha: &NcPartition, beta: &NcPartition) -> Result<StatQuadruple> {
    let n = alpha.n();
    let r = n - perm_product_cycles(alpha, beta)?;
    let sigma = alpha.join(beta)?.length();
    Ok(StatQuadruple::new(
        n,
        r,
        sigma - alpha.length(),
        sigma - beta.length(),
    ))
}

/// `(n, |alpha^{-1} beta|, n-1-|alpha|, n-1-|beta|)` when the join is `1_n`.
pub fn stats_k(alpha: &NcPartition, beta: &NcPartition) -> Result<Option<StatQuadruple>> {
    let n = alpha.n();
    let r = n - perm_product_cycles(alpha, beta)?;
    if !alpha.join(beta)?.is_one() {
        return Ok(None);
    }
    Ok(Some(StatQuadruple::new(
        n,
        r,
        n - 1 - alpha.length(),
        n - 1 - beta.length(),
    )))
}

/// Meet `0_n` and join `1_n`; the join test is `alpha^Kr ^ beta^Kr = 0_n`.
pub fn is_irreducible(alpha: &NcPartition, beta: &NcPartition) -> Result<bool> {
    if !alpha.meet(beta)?.is_zero() {
        return Ok(false);
    }
    Ok(alpha.kreweras().meet(&beta.kreweras())?.is_zero())
}

/// Conditions (1)-(4) of compatibility, which do not involve `n`.
pub fn is_compatible_triple(r: usize, a: usize, b: usize) -> bool {
    let (r, a, b) = (r as i64, a as i64, b as i64);
    let cap = (2 * r - 2).max(1);
    let diff = (a - b).abs();
    a <= cap
        && b <= cap
        && diff <= r
        && r <= a + b
        && (a + b - r) % 2 == 0
        && (r != diff || (a.min(b) == 0 && a.max(b) == r))
}

/// All five compatibility conditions; necessary for `I_{n,r,a,b}` to be
/// nonempty.
pub fn is_compatible(n: usize, r: usize, a: usize, b: usize) -> bool {
    let upper = 2 * r + usize::from(n == 1);
    is_compatible_triple(r, a, b) && r + 1 <= n && n <= upper
}

/// Tally of `M_n^{(k)}` by loop count `k` over all of `NC(n)^2`.
pub fn brute_meander_counts(n: usize) -> Result<BTreeMap<usize, u64>> {
    if n == 0 || n > MAX_BRUTE_MEANDER_N {
        return Err(Error::SizeLimit {
            what: "brute-force meander count",
            n,
            max: MAX_BRUTE_MEANDER_N,
        });
    }
    let all = enumerate_nc(n)?;
    let perms: Vec<Vec<u8>> = all.iter().map(|p| p.perm().to_vec()).collect();
    let invs: Vec<Vec<u8>> = all.iter().map(|p| p.inverse_perm()).collect();
    let tally = perms
        .par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, ap| {
                for binv in &invs {
                    acc[cycles_of_product(ap, binv)] += 1;
                }
                acc
            },
        )
        .reduce(|| vec![0u64; n + 1], add_vecs);
    Ok(tally
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect())
}

// cycles of i -> p[q[i]]
fn cycles_of_product(p: &[u8], q: &[u8]) -> usize {
    let mut seen = 0u64;
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen & (1 << start) != 0 {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while seen & (1 << x) == 0 {
            seen |= 1 << x;
            x = p[q[x] as usize] as usize;
        }
    }
    cycles
}

fn add_vecs(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Which of the three families of pairs to tally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    /// Irreducible pairs with `(r, |alpha|, |beta|)`.
    I,
    /// Pairs with join `1_n` and `(r, n-1-|alpha|, n-1-|beta|)`.
    K,
    /// All pairs with distances to the join.
    M,
}

/// Exhaustive tally over `NC(n)^2` of `(r, a, b)` for the chosen family.
pub fn brute_set_counts(n: usize, kind: SetKind) -> Result<BTreeMap<(usize, usize, usize), u64>> {
    if n == 0 || n > MAX_BRUTE_SET_N {
        return Err(Error::SizeLimit {
            what: "brute-force set count",
            n,
            max: MAX_BRUTE_SET_N,
        });
    }
    let all = enumerate_nc(n)?;
    let per_alpha: Vec<BTreeMap<(usize, usize, usize), u64>> = all
        .par_iter()
        .map(|alpha| {
            let mut local = BTreeMap::new();
            for beta in &all {
                let stat = match kind {
                    SetKind::I => is_irreducible(alpha, beta)
                        .expect("same n")
                        .then(|| stats_i(alpha, beta).expect("same n")),
                    SetKind::K => stats_k(alpha, beta).expect("same n"),
                    SetKind::M => Some(stats_m(alpha, beta).expect("same n")),
                };
                if let Some(s) = stat {
                    *local.entry(s.triple()).or_insert(0) += 1;
                }
            }
            local
        })
        .collect();
    let mut total = BTreeMap::new();
    for local in per_alpha {
        for (k, v) in local {
            *total.entry(k).or_insert(0) += v;
        }
    }
    Ok(total)
}
