use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Truncation degrees in `Y`, `A`, `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub ny: usize,
    pub na: usize,
    pub nb: usize,
}

impl Bounds {
    pub fn new(ny: usize, na: usize, nb: usize) -> Self {
        Bounds { ny, na, nb }
    }

    /// Bounds needed for loop data up to `r_max`.
    pub fn for_r_max(r_max: usize) -> Self {
        let ab = (2 * r_max).saturating_sub(2).max(1);
        Bounds::new(r_max, ab, ab)
    }

    pub fn contains(&self, (y, a, b): Exp) -> bool {
        y <= self.ny && a <= self.na && b <= self.nb
    }

    fn cells(&self) -> usize {
        (self.ny + 1) * (self.na + 1) * (self.nb + 1)
    }

    fn index(&self, (y, a, b): Exp) -> usize {
        (y * (self.na + 1) + a) * (self.nb + 1) + b
    }

    fn exp_at(&self, i: usize) -> Exp {
        let b = i % (self.nb + 1);
        let rest = i / (self.nb + 1);
        (rest / (self.na + 1), rest % (self.na + 1), b)
    }
}

/// Exponents of `Y^y A^a B^b`.
pub type Exp = (usize, usize, usize);

/// A polynomial in `Y, A, B` truncated at [`Bounds`], stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffPoly {
    // sorted by exponent, no zero coefficients
    terms: Vec<(Exp, BigInt)>,
    bounds: Bounds,
}

impl CoeffPoly {
    pub fn zero(bounds: Bounds) -> Self {
        CoeffPoly {
            terms: Vec::new(),
            bounds,
        }
    }

    pub fn one(bounds: Bounds) -> Self {
        Self::monomial(bounds, (0, 0, 0), BigInt::one())
    }

    /// `c * Y^y A^a B^b`, or zero when the exponent is out of bounds.
    pub fn monomial(bounds: Bounds, exp: Exp, c: BigInt) -> Self {
        let mut p = Self::zero(bounds);
        if bounds.contains(exp) && !c.is_zero() {
            p.terms.push((exp, c));
        }
        p
    }

    /// Sums the given terms, dropping those outside `bounds`.
    pub fn from_terms(bounds: Bounds, terms: impl IntoIterator<Item = (Exp, BigInt)>) -> Self {
        let mut acc = DenseAcc::new(bounds);
        for (e, c) in terms {
            if bounds.contains(e) {
                acc.add(e, &c);
            }
        }
        acc.finish()
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: Exp) -> BigInt {
        match self.terms.binary_search_by(|(e, _)| e.cmp(&exp)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn add(&self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut acc = DenseAcc::new(self.bounds);
        acc.add_poly(self);
        acc.add_poly(rhs);
        acc.finish()
    }

    pub fn sub(&self, rhs: &CoeffPoly) -> CoeffPoly {
        self.add(&rhs.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut acc = DenseAcc::new(self.bounds);
        acc.add_product(self, rhs);
        acc.finish()
    }

    pub fn scale(&self, c: &BigInt) -> CoeffPoly {
        if c.is_zero() {
            return Self::zero(self.bounds);
        }
        CoeffPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
            bounds: self.bounds,
        }
    }

    /// Sets `A = B = 1`; the result has bounds `(ny, 0, 0)`.
    pub fn substitute_ab_one(&self) -> CoeffPoly {
        let bounds = Bounds::new(self.bounds.ny, 0, 0);
        CoeffPoly::from_terms(bounds, self.terms.iter().map(|((y, _, _), c)| ((*y, 0, 0), c.clone())))
    }

    /// Value at `Y = A = B = 1`.
    pub fn sum(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((y, a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in [("Y", y), ("A", a), ("B", b)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Dense accumulator over all exponents within bounds.
pub(crate) struct DenseAcc {
    cells: Vec<BigInt>,
    bounds: Bounds,
}

impl DenseAcc {
    pub(crate) fn new(bounds: Bounds) -> Self {
        DenseAcc {
            cells: vec![BigInt::zero(); bounds.cells()],
            bounds,
        }
    }

    fn add(&mut self, e: Exp, c: &BigInt) {
        let i = self.bounds.index(e);
        self.cells[i] += c;
    }

    pub(crate) fn add_poly(&mut self, p: &CoeffPoly) {
        for (e, c) in &p.terms {
            self.add(*e, c);
        }
    }

    pub(crate) fn add_product(&mut self, lhs: &CoeffPoly, rhs: &CoeffPoly) {
        let bd = self.bounds;
        for ((y1, a1, b1), c1) in &lhs.terms {
            for ((y2, a2, b2), c2) in &rhs.terms {
                let y = y1 + y2;
                if y > bd.ny {
                    // terms are sorted by y first
                    break;
                }
                let (a, b) = (a1 + a2, b1 + b2);
                if a > bd.na || b > bd.nb {
                    continue;
                }
                let i = bd.index((y, a, b));
                self.cells[i] += c1 * c2;
            }
        }
    }

    pub(crate) fn finish(self) -> CoeffPoly {
        let bounds = self.bounds;
        let terms = self
            .cells
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (bounds.exp_at(i), c))
            .collect();
        CoeffPoly { terms, bounds }
    }
}
