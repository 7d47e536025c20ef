//! Truncated power series in `X` whose coefficients are integer polynomials
//! in `Y, A, B`, with the F-transform `M = R(X(1 + M))`.

mod poly;
mod polynomial;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::meander::IrreducibleTable;

pub use poly::{Bounds, CoeffPoly, Exp};
pub use polynomial::{change_var_to_w, extract_polynomial, IntPolynomial};
pub(crate) use polynomial::{uni_mul, uni_pow_table};

use poly::DenseAcc;

/// Name of the series variable; it has no effect on arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    W,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::X => "X",
            Variable::W => "w",
        })
    }
}

/// `sum_{n=1}^{nx} c_n(Y,A,B) X^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    // coeffs[n - 1] is the coefficient of X^n
    coeffs: Vec<CoeffPoly>,
    bounds: Bounds,
    var: Variable,
}

impl TruncSeries {
    pub fn zero(var: Variable, nx: usize, bounds: Bounds) -> Self {
        TruncSeries {
            coeffs: vec![CoeffPoly::zero(bounds); nx],
            bounds,
            var,
        }
    }

    /// Builds a series from coefficients of `X^0, X^1, ...`; the constant
    /// term must vanish and coefficients past `nx` are dropped.
    pub fn from_coeffs(
        var: Variable,
        nx: usize,
        bounds: Bounds,
        coeffs: Vec<CoeffPoly>,
    ) -> Result<Self> {
        let mut s = Self::zero(var, nx, bounds);
        for (n, c) in coeffs.into_iter().enumerate() {
            if c.bounds() != bounds {
                return Err(Error::BoundMismatch(format!(
                    "coefficient of {var}^{n} has bounds {:?}, expected {bounds:?}",
                    c.bounds()
                )));
            }
            if n == 0 {
                if !c.is_zero() {
                    return Err(Error::ConstantTerm);
                }
            } else if n <= nx {
                s.coeffs[n - 1] = c;
            }
        }
        Ok(s)
    }

    /// A series with integer coefficients (`Y, A, B` absent); `values[0]` is
    /// the constant term and must be zero.
    pub fn univariate(var: Variable, nx: usize, values: &[BigInt]) -> Result<Self> {
        let bd = Bounds::new(0, 0, 0);
        let coeffs = values
            .iter()
            .map(|v| CoeffPoly::monomial(bd, (0, 0, 0), v.clone()))
            .collect();
        Self::from_coeffs(var, nx, bd, coeffs)
    }

    pub fn nx(&self) -> usize {
        self.coeffs.len()
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn with_var(mut self, var: Variable) -> Self {
        self.var = var;
        self
    }

    /// Coefficient of `X^n` (zero for `n = 0` or beyond the truncation).
    pub fn coeff(&self, n: usize) -> CoeffPoly {
        if n == 0 || n > self.nx() {
            CoeffPoly::zero(self.bounds)
        } else {
            self.coeffs[n - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[CoeffPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CoeffPoly::is_zero)
    }

    /// `[Y^y A^a B^b]` as integers indexed by the power of `X` (entry 0 is 0).
    pub fn slice(&self, exp: Exp) -> Vec<BigInt> {
        std::iter::once(BigInt::zero())
            .chain(self.coeffs.iter().map(|c| c.coeff(exp)))
            .collect()
    }

    /// The series at `Y = A = B = 1`, indexed by the power of `X`.
    pub fn sum_coefficients(&self) -> Vec<BigInt> {
        std::iter::once(BigInt::zero())
            .chain(self.coeffs.iter().map(CoeffPoly::sum))
            .collect()
    }

    /// Sets `A = B = 1`, keeping `Y`.
    pub fn substitute_ab_one(&self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(CoeffPoly::substitute_ab_one).collect(),
            bounds: Bounds::new(self.bounds.ny, 0, 0),
            var: self.var,
        }
    }

    /// `R(inner)` for `inner` without constant term, by Horner's rule.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries> {
        check_same(self, inner)?;
        let nx = self.nx();
        let mut acc = TruncSeries::zero(self.var, nx, self.bounds);
        for n in (1..=nx).rev() {
            // acc <- inner * (c_n + acc)
            let c = &self.coeffs[n - 1];
            let coeffs = (1..=nx)
                .map(|m| {
                    let mut d = DenseAcc::new(self.bounds);
                    d.add_product(&inner.coeffs[m - 1], c);
                    for i in 1..m {
                        d.add_product(&inner.coeffs[i - 1], &acc.coeffs[m - i - 1]);
                    }
                    d.finish()
                })
                .collect();
            acc.coeffs = coeffs;
        }
        Ok(acc)
    }

    /// Dump lines `n y a b coefficient`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            for ((y, a, b), v) in c.terms() {
                out.push_str(&format!("{} {y} {a} {b} {v}\n", i + 1));
            }
        }
        out
    }
}

fn check_same(lhs: &TruncSeries, rhs: &TruncSeries) -> Result<()> {
    if lhs.bounds != rhs.bounds || lhs.nx() != rhs.nx() {
        return Err(Error::BoundMismatch(format!(
            "(nx={}, {:?}) vs (nx={}, {:?})",
            lhs.nx(),
            lhs.bounds,
            rhs.nx(),
            rhs.bounds
        )));
    }
    Ok(())
}

pub fn series_add(lhs: &TruncSeries, rhs: &TruncSeries) -> Result<TruncSeries> {
    check_same(lhs, rhs)?;
    Ok(TruncSeries {
        coeffs: lhs.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x.add(y)).collect(),
        bounds: lhs.bounds,
        var: lhs.var,
    })
}

pub fn series_sub(lhs: &TruncSeries, rhs: &TruncSeries) -> Result<TruncSeries> {
    check_same(lhs, rhs)?;
    Ok(TruncSeries {
        coeffs: lhs.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x.sub(y)).collect(),
        bounds: lhs.bounds,
        var: lhs.var,
    })
}

pub fn series_mul(lhs: &TruncSeries, rhs: &TruncSeries) -> Result<TruncSeries> {
    check_same(lhs, rhs)?;
    let nx = lhs.nx();
    let mut coeffs = Vec::with_capacity(nx);
    for n in 1..=nx {
        let mut acc = DenseAcc::new(lhs.bounds);
        for i in 1..n {
            acc.add_product(&lhs.coeffs[i - 1], &rhs.coeffs[n - i - 1]);
        }
        coeffs.push(acc.finish());
    }
    Ok(TruncSeries {
        coeffs,
        bounds: lhs.bounds,
        var: lhs.var,
    })
}

pub fn substitute_ab_one(s: &TruncSeries) -> TruncSeries {
    s.substitute_ab_one()
}

/// The unique `M` with `M = R(X (1 + M))`, computed order by order.
///
/// `[X^n] M = sum_j R_j [X^n] U^j` with `U = X (1 + M)`, and `[X^n] U^j`
/// only involves `M` below order `n`.
pub fn f_transform(r: &TruncSeries) -> Result<TruncSeries> {
    let nx = r.nx();
    let bd = r.bounds;
    let mut m: Vec<CoeffPoly> = Vec::with_capacity(nx);
    let mut u: Vec<CoeffPoly> = Vec::with_capacity(nx + 1);
    u.push(CoeffPoly::zero(bd));
    // pow[j][n] = [X^n] U^j, filled column by column
    let mut pow: Vec<Vec<CoeffPoly>> = vec![vec![CoeffPoly::zero(bd); nx + 1]; nx + 1];
    for n in 1..=nx {
        u.push(if n == 1 {
            CoeffPoly::one(bd)
        } else {
            m[n - 2].clone()
        });
        pow[1][n] = u[n].clone();
        for j in 2..=n {
            let mut acc = DenseAcc::new(bd);
            // U_1 = 1
            acc.add_poly(&pow[j - 1][n - 1]);
            for k in 2..=n - j + 1 {
                acc.add_product(&u[k], &pow[j - 1][n - k]);
            }
            pow[j][n] = acc.finish();
        }
        let mut acc = DenseAcc::new(bd);
        for j in 1..=n {
            acc.add_product(&r.coeffs[j - 1], &pow[j][n]);
        }
        m.push(acc.finish());
    }
    Ok(TruncSeries {
        coeffs: m,
        bounds: bd,
        var: r.var,
    })
}

/// The irreducible series `I = sum |I_{n,r,a,b}| X^n Y^r A^a B^b`.
pub fn series_from_table(table: &IrreducibleTable, nx: usize, bounds: Bounds) -> Result<TruncSeries> {
    table.check_coverage(nx, bounds.ny)?;
    let mut terms: Vec<Vec<(Exp, BigInt)>> = vec![Vec::new(); nx + 1];
    for (s, &c) in table.entries() {
        if s.n <= nx {
            terms[s.n].push(((s.r, s.a, s.b), BigInt::from(c)));
        }
    }
    let coeffs = terms
        .into_iter()
        .map(|t| CoeffPoly::from_terms(bounds, t))
        .collect();
    TruncSeries::from_coeffs(Variable::X, nx, bounds, coeffs)
}
