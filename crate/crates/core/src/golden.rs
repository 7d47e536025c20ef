//! Reference values for `P~_1 .. P~_6` and the asymptotic constants.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::series::IntPolynomial;

const POLYNOMIALS: &str = include_str!("../golden/polynomials.txt");
const CONSTANTS: &str = include_str!("../golden/constants.txt");

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut fields = l.split_whitespace();
            let r = fields.next().unwrap().parse().expect("golden r");
            (r, fields.collect())
        })
}

pub fn polynomials() -> BTreeMap<usize, IntPolynomial> {
    records(POLYNOMIALS)
        .map(|(r, f)| {
            let coeffs = f.iter().map(|c| BigInt::from_str(c).expect("golden coefficient"));
            (r, IntPolynomial::new(coeffs.collect()))
        })
        .collect()
}

pub fn constants() -> BTreeMap<usize, BigRational> {
    records(CONSTANTS)
        .map(|(r, f)| (r, BigRational::from_str(f[0]).expect("golden constant")))
        .collect()
}
