//! Pruned enumeration of irreducible pairs.
//!
//! For every `alpha` in `NC(n)` the partner `beta` is grown left to right.
//! Blocks of `beta` that can still receive elements form a stack (an element
//! joining a block pops every block above it, which closes them). Three
//! constraints are enforced while growing, not after:
//!
//! * meet `0_n`: a `beta` block never takes two elements of one `alpha` block;
//! * no loop crosses the line only twice, i.e. `sigma = alpha * beta^{-1}` has
//!   no fixed point (a fixed point means a shared singleton or a shared pair,
//!   both reducible for `n >= 2`);
//! * with a bound `r <= R`: `n - 2 * #cycles(sigma) <= 2R - n`. Arcs of `sigma`
//!   become known as `beta` grows, and every path of length `L` in the partial
//!   functional graph ends up in a cycle contributing at least `L - 2`.
//!
//! The join test runs on complete pairs only.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{is_compatible_triple, StatQuadruple};
use crate::error::{Error, Result};
use crate::nclat::{enumerate_nc, NcPartition, MAX_ENUM_N};

/// Default guard on `n` for irreducible enumeration.
pub const DEFAULT_MAX_IRREDUCIBLE_N: usize = 12;

const CAP: usize = 32;

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Only pairs with `r <= max_r` are produced when set.
    pub max_r: Option<usize>,
    /// Lifts [`DEFAULT_MAX_IRREDUCIBLE_N`] (up to the enumeration cap).
    pub override_guard: bool,
    /// Size of the worker pool; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreduciblePair {
    pub alpha: NcPartition,
    pub beta: NcPartition,
    pub stats: StatQuadruple,
}

/// Every irreducible pair on `n` points (with `r <= max_r` when bounded),
/// ordered by `alpha` and then `beta` in canonical order.
pub fn enumerate_irreducible(n: usize, opts: SearchOptions) -> Result<Vec<IrreduciblePair>> {
    check_guard(n, opts)?;
    if n == 1 {
        return Ok(vec![IrreduciblePair {
            alpha: NcPartition::zero(1),
            beta: NcPartition::zero(1),
            stats: StatQuadruple::new(1, 0, 0, 0),
        }]);
    }
    let alphas = enumerate_nc(n)?;
    let run = || {
        alphas
            .par_iter()
            .map(|alpha| {
                let mut out = Vec::new();
                let prep = AlphaData::new(alpha);
                Search::new(&prep, opts.max_r, |beta: &[u8], stats| {
                    out.push(IrreduciblePair {
                        alpha: alpha.clone(),
                        beta: NcPartition::from_labels_unchecked(beta),
                        stats,
                    })
                })
                .run();
                out.sort_unstable_by(|x, y| x.beta.cmp(&y.beta));
                out
            })
            .collect::<Vec<_>>()
    };
    let nested = in_pool(opts.workers, run)?;
    Ok(nested.into_iter().flatten().collect())
}

/// Counts of irreducible pairs on `n` points by statistics.
pub fn count_irreducible(n: usize, opts: SearchOptions) -> Result<BTreeMap<StatQuadruple, u64>> {
    check_guard(n, opts)?;
    if n == 1 {
        return Ok(BTreeMap::from([(StatQuadruple::new(1, 0, 0, 0), 1)]));
    }
    let alphas = enumerate_nc(n)?;
    let cells = n * n * n;
    let index = move |s: StatQuadruple| (s.r * n + s.a) * n + s.b;
    let run = || {
        alphas
            .par_iter()
            .fold(
                || vec![0u64; cells],
                |mut acc, alpha| {
                    let prep = AlphaData::new(alpha);
                    Search::new(&prep, opts.max_r, |_: &[u8], stats| acc[index(stats)] += 1).run();
                    acc
                },
            )
            .reduce(
                || vec![0u64; cells],
                |mut x, y| {
                    for (a, b) in x.iter_mut().zip(y) {
                        *a += b;
                    }
                    x
                },
            )
    };
    let dense = in_pool(opts.workers, run)?;
    let mut out = BTreeMap::new();
    for r in 0..n {
        for a in 0..n {
            for b in 0..n {
                let s = StatQuadruple::new(n, r, a, b);
                let c = dense[index(s)];
                if c > 0 {
                    out.insert(s, c);
                }
            }
        }
    }
    Ok(out)
}

fn check_guard(n: usize, opts: SearchOptions) -> Result<()> {
    let max = if opts.override_guard {
        MAX_ENUM_N
    } else {
        DEFAULT_MAX_IRREDUCIBLE_N
    };
    if n == 0 || n > max {
        return Err(Error::SizeLimit {
            what: "irreducible enumeration",
            n,
            max,
        });
    }
    Ok(())
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
            Ok(pool.install(f))
        }
    }
}

struct AlphaData {
    n: usize,
    label: [u8; CAP],
    perm: [u8; CAP],
    kr_label: [u8; CAP],
    length: usize,
}

impl AlphaData {
    fn new(alpha: &NcPartition) -> Self {
        let n = alpha.n();
        let mut d = AlphaData {
            n,
            label: [0; CAP],
            perm: [0; CAP],
            kr_label: [0; CAP],
            length: alpha.length(),
        };
        d.label[..n].copy_from_slice(alpha.labels());
        d.perm[..n].copy_from_slice(alpha.perm());
        d.kr_label[..n].copy_from_slice(alpha.kreweras().labels());
        d
    }
}

#[derive(Clone, Copy, Default)]
struct OpenBlock {
    label: u8,
    min: u8,
    max: u8,
    // alpha blocks already used by this beta block
    used: u32,
}

enum Undo {
    Closed,
    Merged {
        head: u8,
        tail: u8,
        old_head_of_tail: u8,
        old_tail_of_head: u8,
        old_len: u8,
        old_excess: i32,
    },
}

struct Search<'a, F> {
    alpha: &'a AlphaData,
    n: usize,
    budget: i32,
    max_b: usize,
    visit: F,

    stack: [OpenBlock; CAP],
    depth: usize,
    blocks: u8,
    beta_label: [u8; CAP],
    beta_inv: [u8; CAP],

    // partial functional graph of sigma: disjoint paths and closed cycles
    head_of_tail: [u8; CAP],
    tail_of_head: [u8; CAP],
    len_at_head: [u8; CAP],
    cycles: usize,
    excess: i32,
    trail: Vec<Undo>,
}

fn path_excess(len: u8) -> i32 {
    (len as i32 - 2).max(0)
}

impl<'a, F: FnMut(&[u8], StatQuadruple)> Search<'a, F> {
    fn new(alpha: &'a AlphaData, max_r: Option<usize>, visit: F) -> Self {
        let n = alpha.n;
        let (budget, max_b) = match max_r {
            Some(r) => (2 * r as i32 - n as i32, (2 * r).saturating_sub(2).max(1)),
            None => (i32::MAX, usize::MAX),
        };
        let mut s = Search {
            alpha,
            n,
            budget,
            max_b,
            visit,
            stack: [OpenBlock::default(); CAP],
            depth: 0,
            blocks: 0,
            beta_label: [0; CAP],
            beta_inv: [0; CAP],
            head_of_tail: [0; CAP],
            tail_of_head: [0; CAP],
            len_at_head: [1; CAP],
            cycles: 0,
            excess: 0,
            trail: Vec::with_capacity(2 * CAP),
        };
        for i in 0..n {
            s.head_of_tail[i] = i as u8;
            s.tail_of_head[i] = i as u8;
        }
        s
    }

    fn run(mut self) {
        // compatibility (1) bounds |alpha| like |beta|
        if self.budget < 0 || self.alpha.length > self.max_b {
            return;
        }
        self.extend(0);
    }

    /// Adds the arc `u -> v` of sigma. Returns false when the branch dies.
    fn add_arc(&mut self, u: u8, v: u8) -> bool {
        let head = self.head_of_tail[u as usize];
        if head == v {
            let len = self.len_at_head[v as usize];
            self.cycles += 1;
            self.trail.push(Undo::Closed);
            return len >= 2;
        }
        let tail = self.tail_of_head[v as usize];
        let lh = self.len_at_head[head as usize];
        let lv = self.len_at_head[v as usize];
        let old_excess = self.excess;
        self.trail.push(Undo::Merged {
            head,
            tail,
            old_head_of_tail: self.head_of_tail[tail as usize],
            old_tail_of_head: self.tail_of_head[head as usize],
            old_len: lh,
            old_excess,
        });
        self.excess += path_excess(lh + lv) - path_excess(lh) - path_excess(lv);
        self.head_of_tail[tail as usize] = head;
        self.tail_of_head[head as usize] = tail;
        self.len_at_head[head as usize] = lh + lv;
        self.excess <= self.budget
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                Undo::Closed => self.cycles -= 1,
                Undo::Merged {
                    head,
                    tail,
                    old_head_of_tail,
                    old_tail_of_head,
                    old_len,
                    old_excess,
                } => {
                    self.head_of_tail[tail as usize] = old_head_of_tail;
                    self.tail_of_head[head as usize] = old_tail_of_head;
                    self.len_at_head[head as usize] = old_len;
                    self.excess = old_excess;
                }
            }
        }
    }

    // beta maps max -> min on closing, so sigma(min) = alpha(max).
    fn close(&mut self, block: OpenBlock) -> bool {
        self.beta_inv[block.min as usize] = block.max;
        self.add_arc(block.min, self.alpha.perm[block.max as usize])
    }

    fn extend(&mut self, i: usize) {
        if i == self.n {
            self.finish();
            return;
        }
        // b >= i - blocks regardless of the rest
        if i.saturating_sub(self.blocks as usize) > self.max_b {
            return;
        }
        let bit = 1u32 << self.alpha.label[i];
        let e = i as u8;

        for k in 0..self.depth {
            let block = self.stack[k];
            if block.used & bit != 0 {
                continue;
            }
            let mark = self.trail.len();
            let saved_depth = self.depth;
            let mut popped = [OpenBlock::default(); CAP];
            let above = saved_depth - (k + 1);
            popped[..above].copy_from_slice(&self.stack[k + 1..saved_depth]);

            let mut alive = true;
            for m in (0..above).rev() {
                if !self.close(popped[m]) {
                    alive = false;
                    break;
                }
            }
            if alive {
                self.beta_inv[i] = block.max;
                alive = self.add_arc(e, self.alpha.perm[block.max as usize]);
            }
            if alive {
                self.depth = k + 1;
                self.stack[k] = OpenBlock {
                    max: e,
                    used: block.used | bit,
                    ..block
                };
                self.beta_label[i] = block.label;
                self.extend(i + 1);
                self.stack[k] = block;
                self.stack[k + 1..saved_depth].copy_from_slice(&popped[..above]);
                self.depth = saved_depth;
            }
            self.undo_to(mark);
        }

        // fresh block
        let label = self.blocks;
        self.stack[self.depth] = OpenBlock {
            label,
            min: e,
            max: e,
            used: bit,
        };
        self.depth += 1;
        self.blocks += 1;
        self.beta_label[i] = label;
        self.extend(i + 1);
        self.blocks -= 1;
        self.depth -= 1;
    }

    fn finish(&mut self) {
        let mark = self.trail.len();
        let mut alive = true;
        for k in (0..self.depth).rev() {
            if !self.close(self.stack[k]) {
                alive = false;
                break;
            }
        }
        if alive && self.join_is_one() {
            let n = self.n;
            let r = n - self.cycles;
            let a = self.alpha.length;
            let b = n - self.blocks as usize;
            debug_assert!(is_compatible_triple(r, a, b));
            (self.visit)(&self.beta_label[..n], StatQuadruple::new(n, r, a, b));
        }
        self.undo_to(mark);
    }

    // join 1_n  <=>  Kr(alpha) ^ Kr(beta) = 0_n, with Kr(beta)(i) = beta^{-1}(i+1)
    fn join_is_one(&self) -> bool {
        let n = self.n;
        let mut seen = 0u32;
        for start in 0..n {
            if seen & (1 << start) != 0 {
                continue;
            }
            let mut used = 0u32;
            let mut x = start;
            while seen & (1 << x) == 0 {
                seen |= 1 << x;
                let bit = 1u32 << self.alpha.kr_label[x];
                if used & bit != 0 {
                    return false;
                }
                used |= bit;
                x = self.beta_inv[(x + 1) % n] as usize;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meander::{is_irreducible, stats_i};

    fn brute(n: usize) -> Vec<IrreduciblePair> {
        let all = enumerate_nc(n).unwrap();
        let mut out = Vec::new();
        for a in &all {
            for b in &all {
                if is_irreducible(a, b).unwrap() {
                    out.push(IrreduciblePair {
                        alpha: a.clone(),
                        beta: b.clone(),
                        stats: stats_i(a, b).unwrap(),
                    });
                }
            }
        }
        out
    }

    #[test]
    fn unbounded_search_equals_filtered_square() {
        for n in 1..=7 {
            let got = enumerate_irreducible(n, SearchOptions::default()).unwrap();
            assert_eq!(got, brute(n), "n = {n}");
        }
    }

    #[test]
    fn bounded_search_is_the_truncation() {
        for n in 2..=8 {
            let full = count_irreducible(n, SearchOptions::default()).unwrap();
            for max_r in 0..n {
                let opts = SearchOptions {
                    max_r: Some(max_r),
                    ..Default::default()
                };
                let bounded = count_irreducible(n, opts).unwrap();
                let expected: BTreeMap<_, _> = full
                    .iter()
                    .filter(|(s, _)| s.r <= max_r)
                    .map(|(s, c)| (*s, *c))
                    .collect();
                assert_eq!(bounded, expected, "n = {n}, max_r = {max_r}");
            }
        }
    }

    #[test]
    fn small_cases() {
        let one = enumerate_irreducible(1, SearchOptions::default()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].stats, StatQuadruple::new(1, 0, 0, 0));
        assert_eq!(enumerate_irreducible(2, SearchOptions::default()).unwrap().len(), 2);
        let r2: usize = (1..=4)
            .map(|n| {
                enumerate_irreducible(n, SearchOptions::default())
                    .unwrap()
                    .iter()
                    .filter(|p| p.stats.r == 2)
                    .count()
            })
            .sum();
        assert_eq!(r2, 12);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            count_irreducible(13, SearchOptions::default()),
            Err(Error::SizeLimit { .. })
        ));
        assert!(count_irreducible(0, SearchOptions::default()).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let base = count_irreducible(8, SearchOptions::default()).unwrap();
        for w in [1, 3] {
            let opts = SearchOptions {
                workers: Some(w),
                ..Default::default()
            };
            assert_eq!(count_irreducible(8, opts).unwrap(), base);
        }
    }
}
