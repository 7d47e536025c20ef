use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{Bounds, CoeffPoly, TruncSeries, Variable};
use crate::error::{Error, Result};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from(c.clone()))
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match (d, mag.is_one()) {
                (0, _) => out.push_str(&mag.to_string()),
                (1, true) => out.push_str(var),
                (1, false) => out.push_str(&format!("{mag}{var}")),
                (_, true) => out.push_str(&format!("{var}^{d}")),
                (_, false) => out.push_str(&format!("{mag}{var}^{d}")),
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("w"))
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::serialize_bigints(&self.coeffs, s)
    }
}

/// Product of two integer series truncated to indices `<= n`.
pub(crate) fn uni_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `[s^0, s^1, ..., s^k]` truncated to indices `<= n`.
pub(crate) fn uni_pow_table(s: &[BigInt], k: usize, n: usize) -> Vec<Vec<BigInt>> {
    let mut one = vec![BigInt::zero(); n + 1];
    one[0] = BigInt::one();
    let mut out = vec![one];
    for _ in 0..k {
        let next = uni_mul(out.last().unwrap(), s, n);
        out.push(next);
    }
    out
}

/// Composes `s(t)` with `t = w / (1 + w)^2 = sum_k (-1)^(k-1) k w^k`,
/// keeping powers of `w` up to `nw`.
pub fn change_var_to_w(s: &TruncSeries, nw: usize) -> Result<TruncSeries> {
    if nw > s.nx() {
        return Err(Error::BoundMismatch(format!(
            "nw = {nw} exceeds the series order {}",
            s.nx()
        )));
    }
    let t: Vec<BigInt> = (0..=nw)
        .map(|k| {
            let k = k as i64;
            BigInt::from(if k % 2 == 1 { k } else { -k })
        })
        .collect();
    let pows = uni_pow_table(&t, nw, nw);
    let bd = s.bounds();
    let mut coeffs = vec![CoeffPoly::zero(bd)];
    for m in 1..=nw {
        let mut acc = CoeffPoly::zero(bd);
        for (n, pow) in pows.iter().enumerate().take(m + 1).skip(1) {
            if !pow[m].is_zero() {
                acc = acc.add(&s.coeff(n).scale(&pow[m]));
            }
        }
        coeffs.push(acc);
    }
    TruncSeries::from_coeffs(Variable::W, nw, bd, coeffs)
}

/// Recovers `P` from `s(w) = w^(r+1) (1 + w) P(w) / (1 - w)^(2r - 1)`,
/// asserting the valuation and that `deg P <= 3r - 3` up to truncation.
///
/// `s_w` must carry integer coefficients only (bounds `(0, 0, 0)`).
pub fn extract_polynomial(s_w: &TruncSeries, r: usize) -> Result<IntPolynomial> {
    if r == 0 {
        return Err(Error::StructureViolation(
            "polynomial extraction needs r >= 1".into(),
        ));
    }
    if s_w.bounds() != Bounds::new(0, 0, 0) {
        return Err(Error::BoundMismatch(
            "extraction expects a series with integer coefficients".into(),
        ));
    }
    let nw = s_w.nx();
    let values = s_w.slice((0, 0, 0));
    // (1 - w)^(2r - 1)
    let mut factor = vec![BigInt::zero(); nw + 1];
    factor[0] = BigInt::one();
    for _ in 0..2 * r - 1 {
        for k in (1..=nw).rev() {
            let prev = factor[k - 1].clone();
            factor[k] -= prev;
        }
    }
    let mut c = uni_mul(&values, &factor, nw);
    // divide by (1 + w)
    for k in 1..=nw {
        let prev = c[k - 1].clone();
        c[k] -= prev;
    }
    if let Some(k) = (0..=r.min(nw)).find(|&k| !c[k].is_zero()) {
        return Err(Error::StructureViolation(format!(
            "r = {r}: coefficient of w^{k} is {} but the series must vanish below w^{}",
            c[k],
            r + 1
        )));
    }
    let poly: Vec<BigInt> = c.into_iter().skip(r + 1).collect();
    let max_deg = 3 * r - 3;
    if let Some(d) = (max_deg + 1..poly.len()).find(|&d| !poly[d].is_zero()) {
        return Err(Error::StructureViolation(format!(
            "r = {r}: coefficient of w^{d} is {} beyond the degree bound {max_deg}",
            poly[d]
        )));
    }
    Ok(IntPolynomial::new(poly))
}
