//! Non-crossing partitions of `{1..n}` and their geodesic permutations.
//!
//! An [`NcPartition`] keeps two synchronized views of the same object: the
//! block structure as a restricted growth string (block index of every
//! element, blocks numbered by their minimum) and the permutation whose
//! cycles are the blocks traversed increasingly. Element indices are 0-based
//! in every programmatic API; the cycle-notation text format is 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set accepted by [`enumerate_nc`].
pub const MAX_ENUM_N: usize = 16;

/// Largest ground set representable at all (elements are stored as `u8`).
pub const MAX_N: usize = 255;

const UNSET: u8 = u8::MAX;

/// A non-crossing partition together with its geodesic permutation.
///
/// The derived ordering compares block labels first, which is the canonical
/// lexicographic order of restricted growth strings used by the enumerators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NcPartition {
    // labels in data[..n], permutation images in data[n..]
    data: Box<[u8]>,
}

impl NcPartition {
    /// All singletons, the identity permutation.
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "ground set size {n} out of range");
        let labels: Vec<u8> = (0..n as u8).collect();
        Self::from_labels_unchecked(&labels)
    }

    /// One block, the full cycle `(1,2,...,n)`.
    pub fn one(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "ground set size {n} out of range");
        Self::from_labels_unchecked(&vec![0; n])
    }

    /// Builds a partition from a restricted growth string.
    pub fn from_labels(labels: &[u8]) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_N {
            return Err(Error::NotNonCrossing(format!(
                "ground set size {} out of range",
                labels.len()
            )));
        }
        check_labels(labels).map_err(Error::NotNonCrossing)?;
        Ok(Self::from_labels_unchecked(labels))
    }

    pub(crate) fn from_labels_unchecked(labels: &[u8]) -> Self {
        let n = labels.len();
        let mut data = vec![0u8; 2 * n].into_boxed_slice();
        data[..n].copy_from_slice(labels);
        let mut first = [UNSET; MAX_N];
        let mut last = [UNSET; MAX_N];
        for (i, &l) in labels.iter().enumerate() {
            let l = l as usize;
            if last[l] == UNSET {
                first[l] = i as u8;
            } else {
                data[n + last[l] as usize] = i as u8;
            }
            last[l] = i as u8;
        }
        for l in 0..n {
            if last[l] == UNSET {
                break;
            }
            data[n + last[l] as usize] = first[l];
        }
        NcPartition { data }
    }

    /// Builds a partition from blocks of 0-based elements.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::NotNonCrossing(format!("ground set size {n} out of range")));
        }
        let mut block_of = vec![usize::MAX; n];
        for (bi, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::NotNonCrossing(format!("element {} exceeds n = {n}", e + 1)));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::NotNonCrossing(format!("element {} repeated", e + 1)));
                }
                block_of[e] = bi;
            }
        }
        // uncovered elements become singletons
        let mut rename = vec![UNSET; blocks.len()];
        let mut labels = vec![0u8; n];
        let mut next = 0u8;
        for i in 0..n {
            labels[i] = if block_of[i] == usize::MAX {
                next += 1;
                next - 1
            } else {
                let b = block_of[i];
                if rename[b] == UNSET {
                    rename[b] = next;
                    next += 1;
                }
                rename[b]
            };
        }
        Self::from_labels(&labels)
    }

    /// Builds a partition from a permutation given as 0-based images.
    /// The permutation must be geodesic: every cycle increasing (up to
    /// rotation) and the cycles forming a non-crossing partition.
    pub fn from_perm(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        if n == 0 || n > MAX_N {
            return Err(Error::NotNonCrossing(format!("ground set size {n} out of range")));
        }
        let mut seen = vec![false; n];
        for &x in perm {
            if x >= n || seen[x] {
                return Err(Error::NotNonCrossing("not a permutation".into()));
            }
            seen[x] = true;
        }
        let p: Vec<u8> = perm.iter().map(|&x| x as u8).collect();
        let labels = labels_of_perm(&p);
        check_labels(&labels).map_err(Error::NotNonCrossing)?;
        let candidate = Self::from_labels_unchecked(&labels);
        if candidate.perm() != p.as_slice() {
            return Err(Error::NotNonCrossing(
                "cycles are not traversed in increasing order (not geodesic)".into(),
            ));
        }
        Ok(candidate)
    }

    /// Caller guarantees `perm` is geodesic.
    pub(crate) fn from_perm_unchecked(perm: &[u8]) -> Self {
        let labels = labels_of_perm(perm);
        let p = Self::from_labels_unchecked(&labels);
        debug_assert_eq!(p.perm(), perm);
        p
    }

    pub fn n(&self) -> usize {
        self.data.len() / 2
    }

    /// Block index of every element; blocks are numbered by their minimum.
    pub fn labels(&self) -> &[u8] {
        &self.data[..self.n()]
    }

    /// The geodesic permutation as 0-based images.
    pub fn perm(&self) -> &[u8] {
        &self.data[self.n()..]
    }

    pub fn inverse_perm(&self) -> Vec<u8> {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.perm().iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        inv
    }

    pub fn num_blocks(&self) -> usize {
        self.labels().iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Minimal number of transpositions composing the permutation.
    pub fn length(&self) -> usize {
        self.n() - self.num_blocks()
    }

    /// Blocks as sorted vectors of 0-based elements, ordered by minimum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels().iter().enumerate() {
            blocks[l as usize].push(i);
        }
        blocks
    }

    pub fn is_zero(&self) -> bool {
        self.num_blocks() == self.n()
    }

    pub fn is_one(&self) -> bool {
        self.num_blocks() == 1
    }

    /// `p^{-1} * pi` with `pi = (1,2,...,n)`.
    pub fn kreweras(&self) -> Self {
        let n = self.n();
        let inv = self.inverse_perm();
        let kr: Vec<u8> = (0..n).map(|i| inv[(i + 1) % n]).collect();
        Self::from_perm_unchecked(&kr)
    }

    /// Inverse of [`kreweras`](Self::kreweras): `pi * p^{-1}`.
    pub fn kreweras_inverse(&self) -> Self {
        let n = self.n();
        let inv = self.inverse_perm();
        let k: Vec<u8> = (0..n).map(|i| ((inv[i] as usize + 1) % n) as u8).collect();
        Self::from_perm_unchecked(&k)
    }

    /// Largest partition below both: the common refinement.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        Error::check_same_n(self.n(), other.n())?;
        let n = self.n();
        let width = other.num_blocks();
        let mut rename = vec![UNSET; self.num_blocks() * width];
        let mut labels = vec![0u8; n];
        let mut next = 0u8;
        for i in 0..n {
            let key = self.labels()[i] as usize * width + other.labels()[i] as usize;
            if rename[key] == UNSET {
                rename[key] = next;
                next += 1;
            }
            labels[i] = rename[key];
        }
        Ok(Self::from_labels_unchecked(&labels))
    }

    /// Smallest non-crossing partition above both, via
    /// `(p v q)^Kr = p^Kr ^ q^Kr`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        Ok(self.kreweras().meet(&other.kreweras())?.kreweras_inverse())
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        Error::check_same_n(self.n(), other.n())?;
        let mut image = vec![UNSET; self.num_blocks()];
        for (&a, &b) in self.labels().iter().zip(other.labels()) {
            let slot = &mut image[a as usize];
            if *slot == UNSET {
                *slot = b;
            } else if *slot != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The non-crossing pairing on `{1-,1+,...,n-,n+}` joining `i+` to `p(i)-`.
    pub fn fatten(&self) -> Pairing2n {
        let n = self.n();
        let mut partner = vec![0u16; 2 * n];
        for (i, &j) in self.perm().iter().enumerate() {
            let plus = 2 * i + 1;
            let minus = 2 * j as usize;
            partner[plus] = minus as u16;
            partner[minus] = plus as u16;
        }
        Pairing2n { partner }
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`. Omitted elements are
    /// fixed points; `""` and `"()"` denote the identity. A cycle written
    /// without commas, like `(12)`, is read digit by digit when `n <= 9`.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::parse(text, format!("ground set size {n} out of range")));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_end = match (rest.strip_prefix('('), rest.find(')')) {
                (Some(_), Some(end)) => end,
                _ => return Err(Error::parse(text, "expected '(' ... ')'")),
            };
            let body = &rest[1..body_end];
            rest = rest[body_end + 1..].trim_start();
            let cycle = parse_cycle_body(text, body, n)?;
            for &e in &cycle {
                if used[e] {
                    return Err(Error::parse(text, format!("element {} repeated", e + 1)));
                }
                used[e] = true;
            }
            for (k, &e) in cycle.iter().enumerate() {
                perm[e] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_perm(&perm).map_err(|e| match e {
            Error::NotNonCrossing(reason) => Error::parse(text, reason),
            other => other,
        })
    }

    /// Canonical cycle notation: cycles of length at least two, ordered by
    /// minimum, elements ascending, 1-based. The identity formats as `""`.
    pub fn to_cycles(&self) -> String {
        let mut out = String::new();
        for block in self.blocks() {
            if block.len() < 2 {
                continue;
            }
            out.push('(');
            for (k, e) in block.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&(e + 1).to_string());
            }
            out.push(')');
        }
        out
    }
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycles())
    }
}

impl fmt::Debug for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPartition(n={}, {:?})", self.n(), self.to_cycles())
    }
}

fn parse_cycle_body(text: &str, body: &str, n: usize) -> Result<Vec<usize>> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let tokens: Vec<String> = if !body.contains(',') && n <= 9 {
        body.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_string())
            .collect()
    } else {
        body.split(',').map(|t| t.trim().to_string()).collect()
    };
    let mut cycle = Vec::with_capacity(tokens.len());
    for t in tokens {
        let v: usize = t
            .parse()
            .map_err(|_| Error::parse(text, format!("bad element {t:?}")))?;
        if v == 0 || v > n {
            return Err(Error::parse(text, format!("element {v} outside 1..={n}")));
        }
        cycle.push(v - 1);
    }
    Ok(cycle)
}

/// Labels blocks (cycles) in order of their minimum element.
fn labels_of_perm(perm: &[u8]) -> Vec<u8> {
    let n = perm.len();
    let mut labels = vec![UNSET; n];
    let mut next = 0u8;
    for start in 0..n {
        if labels[start] != UNSET {
            continue;
        }
        let mut x = start;
        while labels[x] == UNSET {
            labels[x] = next;
            x = perm[x] as usize;
        }
        next += 1;
    }
    labels
}

/// Checks that `labels` is a restricted growth string of a non-crossing
/// partition. Blocks still able to receive elements form a stack; an element
/// may only join a block on the stack, popping everything above it.
fn check_labels(labels: &[u8]) -> std::result::Result<(), String> {
    let mut stack: Vec<u8> = Vec::with_capacity(labels.len());
    let mut next = 0u8;
    for (i, &l) in labels.iter().enumerate() {
        if l == next {
            stack.push(l);
            next += 1;
        } else if l > next {
            return Err(format!("labels are not a restricted growth string at {}", i + 1));
        } else {
            match stack.iter().rposition(|&s| s == l) {
                Some(pos) => stack.truncate(pos + 1),
                None => return Err(format!("element {} crosses an earlier block", i + 1)),
            }
        }
    }
    Ok(())
}

/// A perfect matching of the `2n` points `1-,1+,...,n-,n+`; point `i-` has
/// position `2i`, point `i+` position `2i+1` (0-based `i`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pairing2n {
    partner: Vec<u16>,
}

/// One of the two copies `i-`, `i+` of element `i` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub element: usize,
    pub plus: bool,
}

impl Point {
    pub fn position(self) -> usize {
        2 * self.element + self.plus as usize
    }

    pub fn from_position(pos: usize) -> Self {
        Point {
            element: pos / 2,
            plus: pos % 2 == 1,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.element + 1, if self.plus { '+' } else { '-' })
    }
}

impl Pairing2n {
    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// Partner of the point at `pos`.
    pub fn partner(&self, pos: usize) -> usize {
        self.partner[pos] as usize
    }

    /// Pairs ordered by their left endpoint.
    pub fn pairs(&self) -> Vec<(Point, Point)> {
        (0..self.partner.len())
            .filter(|&p| p < self.partner(p))
            .map(|p| (Point::from_position(p), Point::from_position(self.partner(p))))
            .collect()
    }

    pub fn is_perfect_matching(&self) -> bool {
        self.partner
            .iter()
            .enumerate()
            .all(|(p, &q)| (q as usize) != p && self.partner(q as usize) == p)
    }

    /// No two pairs `{a,b}`, `{c,d}` with `a < c < b < d`.
    pub fn is_non_crossing(&self) -> bool {
        let mut open: Vec<usize> = Vec::new();
        for p in 0..self.partner.len() {
            let q = self.partner(p);
            if q > p {
                open.push(p);
            } else if open.pop() != Some(q) {
                return false;
            }
        }
        open.is_empty()
    }
}

impl fmt::Display for Pairing2n {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.pairs() {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pairing2n {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pairing2n({self})")
    }
}

/// Number of cycles of `p * q^{-1}` (composition applies `q^{-1}` first).
pub fn perm_product_cycles(p: &NcPartition, q: &NcPartition) -> Result<usize> {
    Error::check_same_n(p.n(), q.n())?;
    let q_inv = q.inverse_perm();
    let pp = p.perm();
    let n = p.n();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = pp[q_inv[x] as usize] as usize;
        }
    }
    Ok(cycles)
}

/// Catalan number `Cat_n`, exact for `n <= 35`.
pub fn catalan(n: usize) -> u64 {
    assert!(n <= 35, "Cat_{n} overflows u64");
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c as u64
}

/// All of `NC(n)` in canonical order. Element 1's block is placed first as
/// an increasing set; the gaps it leaves are independent intervals that are
/// filled recursively, left to right.
pub fn enumerate_nc(n: usize) -> Result<Vec<NcPartition>> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(Error::SizeLimit {
            what: "non-crossing partition enumeration",
            n,
            max: MAX_ENUM_N,
        });
    }
    let mut out = Vec::with_capacity(catalan(n) as usize);
    let mut labels = vec![0u8; n];
    let mut pending = vec![(0u8, n as u8)];
    fill_intervals(&mut pending, &mut labels, 0, &mut |l| {
        out.push(NcPartition::from_labels_unchecked(l))
    });
    out.sort_unstable();
    Ok(out)
}

// `pending` holds the unfilled intervals [lo, hi), leftmost on top.
fn fill_intervals(
    pending: &mut Vec<(u8, u8)>,
    labels: &mut [u8],
    next: u8,
    emit: &mut dyn FnMut(&[u8]),
) {
    let Some((lo, hi)) = pending.pop() else {
        emit(labels);
        return;
    };
    labels[lo as usize] = next;
    let mut gaps = Vec::with_capacity((hi - lo) as usize);
    choose_block(lo, hi, lo + 1, lo, &mut gaps, pending, labels, next, emit);
    pending.push((lo, hi));
}

#[allow(clippy::too_many_arguments)]
fn choose_block(
    lo: u8,
    hi: u8,
    pos: u8,
    last: u8,
    gaps: &mut Vec<(u8, u8)>,
    pending: &mut Vec<(u8, u8)>,
    labels: &mut [u8],
    label: u8,
    emit: &mut dyn FnMut(&[u8]),
) {
    if pos == hi {
        let base = pending.len();
        if last + 1 < hi {
            pending.push((last + 1, hi));
        }
        for &g in gaps.iter().rev() {
            pending.push(g);
        }
        fill_intervals(pending, labels, label + 1, emit);
        pending.truncate(base);
        return;
    }
    // including `pos` first yields lexicographic label order
    labels[pos as usize] = label;
    let pushed = last + 1 < pos;
    if pushed {
        gaps.push((last + 1, pos));
    }
    choose_block(lo, hi, pos + 1, pos, gaps, pending, labels, label, emit);
    if pushed {
        gaps.pop();
    }
    choose_block(lo, hi, pos + 1, last, gaps, pending, labels, label, emit);
}

/// Streaming iterator over `NC(n)` in the same canonical order as
/// [`enumerate_nc`], without materializing the list.
pub struct NcIter {
    labels: Vec<u8>,
    started: bool,
    done: bool,
}

impl NcIter {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::SizeLimit {
                what: "non-crossing partition iteration",
                n,
                max: MAX_N,
            });
        }
        Ok(NcIter {
            labels: vec![0; n],
            started: false,
            done: false,
        })
    }

    // Advances to the lexicographic successor; false when exhausted.
    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for k in (1..n).rev() {
            let (stack, next) = open_blocks(&self.labels[..k]);
            let cur = self.labels[k];
            let candidate = stack
                .iter()
                .copied()
                .chain(std::iter::once(next))
                .find(|&l| l > cur);
            if let Some(l) = candidate {
                self.labels[k] = l;
                self.labels[k + 1..].fill(0);
                return true;
            }
        }
        false
    }
}

// Blocks of the prefix that may still receive elements (bottom to top,
// which is also increasing label order) and the next fresh label.
fn open_blocks(prefix: &[u8]) -> (Vec<u8>, u8) {
    let mut stack = Vec::with_capacity(prefix.len());
    let mut next = 0u8;
    for &l in prefix {
        if l == next {
            stack.push(l);
            next += 1;
        } else if let Some(pos) = stack.iter().rposition(|&s| s == l) {
            stack.truncate(pos + 1);
        }
    }
    (stack, next)
}

impl Iterator for NcIter {
    type Item = NcPartition;

    fn next(&mut self) -> Option<NcPartition> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(NcPartition::from_labels_unchecked(&self.labels))
    }
}
