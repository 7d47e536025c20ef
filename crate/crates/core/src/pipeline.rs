//! Irreducible counts -> I -> K -> M -> F_r -> P~_r -> asymptotic constants,
//! with structural checks after every stage.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::meander::{
    brute_meander_counts, brute_set_counts, build_complete_table, build_irreducible_table,
    IrreducibleTable, SetKind, TableOptions, MAX_BRUTE_SET_N,
};
use crate::nclat::catalan;
use crate::series::{
    change_var_to_w, extract_polynomial, f_transform, series_from_table, uni_mul, uni_pow_table,
    Bounds, IntPolynomial, TruncSeries, Variable,
};

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub cache_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub override_guard: bool,
}

impl PipelineOptions {
    fn table(&self) -> TableOptions {
        TableOptions {
            cache_dir: self.cache_dir.clone(),
            override_guard: self.override_guard,
            workers: self.workers,
        }
    }
}

/// Smallest sound series order for `r_max`.
pub fn default_nx(r_max: usize) -> usize {
    4 * r_max + 4
}

/// One line of the stage-check report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("{status} {}: {}", self.name, self.detail)
    }
}

/// `M_n^{(n-r)} ~ c_r / sqrt(pi) * 4^n * n^((2r-3)/2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticConstant {
    pub r: usize,
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub p_at_one: BigInt,
    #[serde(serialize_with = "serialize_rational")]
    pub c: BigRational,
    /// `c_r / sqrt(pi)`.
    pub value: f64,
}

fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn serialize_series<S: Serializer>(
    m: &BTreeMap<usize, Vec<BigInt>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let as_numbers: BTreeMap<usize, Vec<serde_json::Number>> = m
        .iter()
        .map(|(r, v)| (*r, v.iter().map(crate::json::bigint_number).collect()))
        .collect();
    as_numbers.serialize(s)
}

/// `P_{r,a,b}` for one `(a, b)`; they sum to `P~_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialPolynomial {
    pub r: usize,
    pub a: usize,
    pub b: usize,
    pub coeffs: IntPolynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineResult {
    pub r_max: usize,
    pub nx: usize,
    /// `P~_r` for `1 <= r <= r_max`.
    pub polys: BTreeMap<usize, IntPolynomial>,
    /// `M_n^{(n-r)}` for `n = 1..=nx`, per `r <= r_max`.
    #[serde(serialize_with = "serialize_series")]
    pub f_series: BTreeMap<usize, Vec<BigInt>>,
    pub asympt: BTreeMap<usize, AsymptoticConstant>,
    pub partial_polys: Vec<PartialPolynomial>,
    pub diagnostics: Vec<Check>,
}

impl PipelineResult {
    pub fn passed(&self) -> bool {
        self.diagnostics.iter().all(|c| c.passed)
    }
}

/// Builds (or loads) the irreducible table and runs every stage.
pub fn run_pipeline(r_max: usize, nx: usize, opts: &PipelineOptions) -> Result<PipelineResult> {
    let table = build_irreducible_table(r_max, &opts.table())?;
    run_pipeline_with_table(&table, r_max, nx)
}

pub fn run_pipeline_with_table(
    table: &IrreducibleTable,
    r_max: usize,
    nx: usize,
) -> Result<PipelineResult> {
    if nx < default_nx(r_max) {
        return Err(Error::BoundMismatch(format!(
            "order {nx} is below the minimum {} for r_max = {r_max}",
            default_nx(r_max)
        )));
    }
    let bounds = Bounds::for_r_max(r_max);
    let mut diagnostics = Vec::new();

    let i = series_from_table(table, nx, bounds)?;
    let k = f_transform(&i)?;
    diagnostics.push(check_k_unit(&k)?);
    diagnostics.push(check_k_rational(&k, r_max)?);
    let m = f_transform(&k)?;
    diagnostics.push(check_m_catalan(&m)?);

    let m_ab = m.substitute_ab_one();
    let f_series: BTreeMap<usize, Vec<BigInt>> = (0..=r_max)
        .map(|r| (r, m_ab.slice((r, 0, 0))[1..].to_vec()))
        .collect();

    let mw = change_var_to_w(&m, nx)?;
    diagnostics.push(check_g000_is_w(&mw)?);
    let mw_ab = mw.substitute_ab_one();
    let mut polys = BTreeMap::new();
    let mut partial_polys = Vec::new();
    let mut asympt = BTreeMap::new();
    for r in 1..=r_max {
        let fw = TruncSeries::univariate(Variable::W, nx, &mw_ab.slice((r, 0, 0)))?;
        let p = extract_polynomial(&fw, r)?;
        diagnostics.push(Check::pass(
            format!("tail r={r}"),
            format!("valuation w^{} and degree {} <= {}", r + 1, p.degree().map_or(0, |d| d), 3 * r - 3),
        ));

        let mut total = vec![BigInt::zero(); p.coeffs().len()];
        for a in 0..=bounds.na {
            for b in 0..=bounds.nb {
                let s = TruncSeries::univariate(Variable::W, nx, &mw.slice((r, a, b)))?;
                if s.is_zero() {
                    continue;
                }
                let q = extract_polynomial(&s, r)?;
                for (t, c) in total.iter_mut().zip(q.coeffs()) {
                    *t += c;
                }
                partial_polys.push(PartialPolynomial { r, a, b, coeffs: q });
            }
        }
        if IntPolynomial::new(total) != p {
            return Err(Error::StructureViolation(format!(
                "r = {r}: the P_(r,a,b) do not sum to P~_r"
            )));
        }

        diagnostics.push(check_even(r, &p, &f_series[&r])?);
        diagnostics.push(check_closed_form(r, &p, &f_series[&r])?);
        match asymptotic_constant(r, &p) {
            Ok(c) => {
                asympt.insert(r, c);
            }
            Err(Error::Hypothesis { r }) => diagnostics.push(Check::fail(
                format!("hypothesis r={r}"),
                "P~_r(1) = 0; the asymptotic constant is undefined",
            )),
            Err(e) => return Err(e),
        }
        polys.insert(r, p);
    }
    for r in 1..=r_max.min(3) {
        if let Some(c) = asympt.get(&r) {
            diagnostics.push(check_trend(r, c, &polys[&r])?);
        }
    }
    Ok(PipelineResult {
        r_max,
        nx,
        polys,
        f_series,
        asympt,
        partial_polys,
        diagnostics,
    })
}

fn violation(msg: String) -> Error {
    Error::StructureViolation(msg)
}

// |K_{n,0,0,0}| = 1
fn check_k_unit(k: &TruncSeries) -> Result<Check> {
    for (n, c) in k.slice((0, 0, 0)).iter().enumerate().skip(1) {
        if !c.is_one() {
            return Err(violation(format!("[X^{n}] f_000 = {c}, expected 1")));
        }
    }
    Ok(Check::pass("K unit", format!("f_000 = X/(1-X) to order {}", k.nx())))
}

// |M_{n,0,0,0}| = Cat_n
fn check_m_catalan(m: &TruncSeries) -> Result<Check> {
    for (n, c) in m.slice((0, 0, 0)).iter().enumerate().skip(1) {
        if *c != BigInt::from(catalan(n)) {
            return Err(violation(format!("[X^{n}] g_000 = {c}, expected Cat_{n}")));
        }
    }
    Ok(Check::pass("M Catalan", format!("g_000 = Catalan to order {}", m.nx())))
}

fn check_g000_is_w(mw: &TruncSeries) -> Result<Check> {
    for (n, c) in mw.slice((0, 0, 0)).iter().enumerate().skip(1) {
        if *c != BigInt::from((n == 1) as u8) {
            return Err(violation(format!("[w^{n}] g~_000 = {c}, expected [n = 1]")));
        }
    }
    Ok(Check::pass("M w-form", "g~_000(w) = w"))
}

/// `(1 - X)^(2r+1) f_{r,a,b} / X^(r+1)` is a polynomial of degree
/// `<= r - [r >= 1]`.
fn check_k_rational(k: &TruncSeries, r_max: usize) -> Result<Check> {
    let nx = k.nx();
    let bd = k.bounds();
    let mut checked = 0;
    for r in 0..=r_max {
        let mut factor = vec![BigInt::zero(); nx + 1];
        factor[0] = BigInt::one();
        for _ in 0..2 * r + 1 {
            for j in (1..=nx).rev() {
                let prev = factor[j - 1].clone();
                factor[j] -= prev;
            }
        }
        for a in 0..=bd.na {
            for b in 0..=bd.nb {
                let f = k.slice((r, a, b));
                if f.iter().all(Zero::is_zero) {
                    continue;
                }
                let c = uni_mul(&f, &factor, nx);
                let max_deg = r - usize::from(r >= 1);
                for (j, v) in c.iter().enumerate() {
                    let in_range = j > r && j - (r + 1) <= max_deg;
                    if !in_range && !v.is_zero() {
                        return Err(violation(format!(
                            "K rational form fails for (r,a,b) = ({r},{a},{b}) at X^{j}"
                        )));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(Check::pass(
        "K rational form",
        format!("{checked} coefficient series f_(r,a,b) have the rational form"),
    ))
}

fn check_even(r: usize, p: &IntPolynomial, f: &[BigInt]) -> Result<Check> {
    let two = BigInt::from(2);
    if let Some(c) = p.coeffs().iter().find(|c| !c.is_multiple_of(&two)) {
        return Err(violation(format!("P~_{r} has odd coefficient {c}")));
    }
    if let Some((n, c)) = f.iter().enumerate().find(|(_, c)| !c.is_multiple_of(&two)) {
        return Err(violation(format!("M_{}^({}) = {c} is odd", n + 1, n + 1 - r)));
    }
    Ok(Check::pass(format!("even r={r}"), "P~_r and F_r coefficients are even"))
}

/// Order up to which the trend check expands `F_r` from its closed form.
pub const TREND_ORDER: usize = 256;

/// `[t^n] F_r` for `n = 1..=n_max` from `P~_r`, by expanding the closed form
/// in `w` and substituting `w = t C(t)^2`, where
/// `[t^n] w^m = (m / n) binom(2n, n - m)`.
pub fn expand_closed_form(r: usize, p: &IntPolynomial, n_max: usize) -> Vec<BigInt> {
    // (1 - w)^-(2r - 1) = sum_k C(k + 2r - 2, 2r - 2) w^k
    let inv: Vec<BigInt> = (0..=n_max)
        .map(|k| num_integer::binomial(BigInt::from(k + 2 * r - 2), BigInt::from(2 * r - 2)))
        .collect();
    let mut head = vec![BigInt::zero(); n_max + 1];
    for (d, c) in p.coeffs().iter().enumerate() {
        for e in [d + r + 1, d + r + 2] {
            if e <= n_max {
                head[e] += c;
            }
        }
    }
    let g = uni_mul(&head, &inv, n_max);
    (1..=n_max)
        .map(|n| {
            // binom(2n, n - m) for m = n, n-1, ..., 1
            let mut binom = BigInt::one();
            let mut acc = BigInt::zero();
            for m in (1..=n).rev() {
                if m < n {
                    // binom(2n, k + 1) = binom(2n, k) (2n - k) / (k + 1), k = n - m - 1
                    let k = n - m - 1;
                    binom = binom * (2 * n - k) / (k + 1);
                }
                acc += &g[m] * m * &binom;
            }
            let (q, rem) = acc.div_rem(&BigInt::from(n));
            debug_assert!(rem.is_zero());
            q
        })
        .collect()
}

fn check_closed_form(r: usize, p: &IntPolynomial, f: &[BigInt]) -> Result<Check> {
    let nx = f.len();
    let expanded = expand_closed_form(r, p, nx);
    if let Some(n) = (0..nx).find(|&n| expanded[n] != f[n]) {
        return Err(violation(format!(
            "closed form for r = {r} gives {} at t^{}, expected {}",
            expanded[n],
            n + 1,
            f[n]
        )));
    }
    Ok(Check::pass(
        format!("closed form r={r}"),
        format!("re-expansion reproduces F_r to order {nx}"),
    ))
}

/// Ratio of `M_n^{(n-r)}` to its asymptotic form, using the closed form to
/// reach `n = TREND_ORDER`.
fn check_trend(r: usize, c: &AsymptoticConstant, p: &IntPolynomial) -> Result<Check> {
    let f = expand_closed_form(r, p, TREND_ORDER);
    let ratio = |n: usize| {
        // scale by 4^-n exactly before converting to floating point
        let scaled = BigRational::new(f[n - 1].clone(), BigInt::one() << (2 * n));
        let n = n as f64;
        scaled.to_f64().unwrap_or(f64::NAN) / (c.value * n.powf(r as f64 - 1.5))
    };
    let samples: Vec<usize> = [r + 1, 16, 32, 64, 128, TREND_ORDER]
        .into_iter()
        .filter(|&n| n > r)
        .collect();
    let ratios: Vec<f64> = samples.iter().map(|&n| ratio(n)).collect();
    let last = *ratios.last().unwrap();
    let monotone = ratios
        .windows(2)
        .all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs());
    let trail: Vec<String> = samples
        .iter()
        .zip(&ratios)
        .map(|(n, q)| format!("n={n}: {q:.4}"))
        .collect();
    let detail = format!(
        "{}{}",
        trail.join(", "),
        if monotone { "" } else { " (not monotone)" }
    );
    if (last - 1.0).abs() > 0.2 {
        return Err(violation(format!("trend r = {r}: {detail}")));
    }
    Ok(Check::pass(format!("trend r={r}"), detail))
}

/// `c_r = P~_r(1) / (2^(r-1) (2r-3)!!)`; the constant is `c_r / sqrt(pi)`.
pub fn asymptotic_constant(r: usize, poly: &IntPolynomial) -> Result<AsymptoticConstant> {
    if r == 0 {
        return Err(Error::StructureViolation("asymptotic constants need r >= 1".into()));
    }
    let p_at_one = poly.eval(&BigInt::one());
    if p_at_one.is_zero() {
        return Err(Error::Hypothesis { r });
    }
    let mut den = BigInt::one() << (r - 1);
    let mut k = 2 * r as i64 - 3;
    while k > 1 {
        den *= k;
        k -= 2;
    }
    let c = BigRational::new(p_at_one.clone(), den);
    let value = c.to_f64().unwrap_or(f64::NAN) / std::f64::consts::PI.sqrt();
    Ok(AsymptoticConstant {
        r,
        p_at_one,
        c,
        value,
    })
}

/// Outcome of an oracle comparison.
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub compared: usize,
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the I, K, M series and F_r against brute-force counts over
/// `NC(n)^2` for every `n <= n_max`.
pub fn verify_against_brute(n_max: usize) -> Result<VerifyReport> {
    if n_max == 0 || n_max > MAX_BRUTE_SET_N {
        return Err(Error::SizeLimit {
            what: "brute-force verification",
            n: n_max,
            max: MAX_BRUTE_SET_N,
        });
    }
    let table = build_complete_table(n_max, &TableOptions::default())?;
    let top = n_max - 1;
    let bounds = Bounds::new(top, top, top);
    let i = series_from_table(&table, n_max, bounds)?;
    let k = f_transform(&i)?;
    let m = f_transform(&k)?;
    let m_ab = m.substitute_ab_one();
    let mut report = VerifyReport {
        n_max,
        ..Default::default()
    };
    for n in 1..=n_max {
        for (name, kind, series) in [("I", SetKind::I, &i), ("K", SetKind::K, &k), ("M", SetKind::M, &m)] {
            let brute = brute_set_counts(n, kind)?;
            let coeff = series.coeff(n);
            let mut keys: Vec<_> = brute.keys().copied().collect();
            keys.extend(coeff.terms().map(|(e, _)| e));
            keys.sort_unstable();
            keys.dedup();
            for key in keys {
                let want = BigInt::from(brute.get(&key).copied().unwrap_or(0));
                let got = coeff.coeff(key);
                report.compared += 1;
                if got != want {
                    report.mismatches.push(format!(
                        "{name}: n={n} (r,a,b)={key:?} series {got} brute {want}"
                    ));
                }
            }
        }
        for (loops, count) in brute_meander_counts(n)? {
            let r = n - loops;
            let got = m_ab.coeff(n).coeff((r, 0, 0));
            report.compared += 1;
            if got != BigInt::from(count) {
                report.mismatches.push(format!(
                    "F_{r}: n={n} series {got} brute {count}"
                ));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LandoZvonkinReport {
    pub n_max: usize,
    /// `|I_n|` for `n = 1..=n_max`.
    pub irreducible_totals: Vec<u64>,
    /// `[X^n] (1 + M(X,1,1,1))` from the two F-transforms.
    #[serde(serialize_with = "crate::json::serialize_bigints")]
    pub two_step: Vec<BigInt>,
    /// `[X^n] (1 + I)(X (1 + M)^2)`.
    #[serde(serialize_with = "crate::json::serialize_bigints")]
    pub composed: Vec<BigInt>,
    /// Solution of `B = (1 + I)(X B^2)`.
    #[serde(serialize_with = "crate::json::serialize_bigints")]
    pub solved: Vec<BigInt>,
    /// `|I_n|^(1/n)`, for comparison with `(pi / (4 - pi))^2`.
    pub growth: Vec<f64>,
    pub mismatches: Vec<String>,
}

impl LandoZvonkinReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn lando_zvonkin_growth_constant() -> f64 {
    let pi = std::f64::consts::PI;
    (pi / (4.0 - pi)).powi(2)
}

/// Checks `1 + M = (1 + I)(X (1 + M)^2)` at `Y = A = B = 1` to order `n_max`,
/// with the right side computed by plain univariate arithmetic.
pub fn lando_zvonkin_check(n_max: usize, opts: &PipelineOptions) -> Result<LandoZvonkinReport> {
    let table = build_complete_table(n_max, &opts.table())?;
    let top = n_max.saturating_sub(1);
    let bounds = Bounds::new(top, top, top);
    let i = series_from_table(&table, n_max, bounds)?;
    let mut two_step = f_transform(&f_transform(&i)?)?.sum_coefficients();
    two_step[0] = BigInt::one();

    let totals: Vec<u64> = (1..=n_max).map(|n| table.total(n)).collect();
    let mut n_series = vec![BigInt::one()];
    n_series.extend(totals.iter().map(|&t| BigInt::from(t)));

    let compose_quadratic = |b: &[BigInt]| {
        // (1 + I)(x b^2)
        let mut inner = vec![BigInt::zero()];
        inner.extend(uni_mul(b, b, n_max).into_iter().take(n_max));
        let pows = uni_pow_table(&inner, n_max, n_max);
        (0..=n_max)
            .map(|n| (0..=n).map(|j| &n_series[j] * &pows[j][n]).sum())
            .collect::<Vec<BigInt>>()
    };
    let composed = compose_quadratic(&two_step);
    let mut solved = vec![BigInt::one(); 1];
    solved.resize(n_max + 1, BigInt::zero());
    for _ in 0..n_max {
        solved = compose_quadratic(&solved);
    }

    let mut mismatches = Vec::new();
    for n in 0..=n_max {
        let cat2 = BigInt::from(catalan(n)).pow(2);
        if composed[n] != two_step[n] {
            mismatches.push(format!(
                "order {n}: two-step {} vs composed {}",
                two_step[n], composed[n]
            ));
        }
        if solved[n] != two_step[n] || solved[n] != cat2 {
            mismatches.push(format!(
                "order {n}: solved {} vs two-step {} vs Cat^2 {cat2}",
                solved[n], two_step[n]
            ));
        }
    }
    let growth = totals
        .iter()
        .enumerate()
        .map(|(k, &t)| (t as f64).powf(1.0 / (k + 1) as f64))
        .collect();
    Ok(LandoZvonkinReport {
        n_max,
        irreducible_totals: totals,
        two_step,
        composed,
        solved,
        growth,
        mismatches,
    })
}
