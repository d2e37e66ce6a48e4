//! Nonzero zeros of odd degree diagonal forms over each supported field.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{solve_diagonal_function_field, BirchField, DiagonalEquation, FunctionFieldSolution, SolverBudget};
use crate::error::{Error, Result};
use crate::scalar::{denominator_lcm, exact_root, RatFunc, RealAlg, Scalar, Q};

/// A zero of a diagonal form, tagged by the field it lives over.
#[derive(Clone, Debug)]
pub enum DiagonalSolution {
    Rational(Vec<Q>),
    Real(Vec<RealAlg>),
    FunctionField(FunctionFieldSolution),
}

impl DiagonalSolution {
    pub fn len(&self) -> usize {
        match self {
            DiagonalSolution::Rational(v) => v.len(),
            DiagonalSolution::Real(v) => v.len(),
            DiagonalSolution::FunctionField(s) => s.enclosure.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Over the reals two variables suffice: `x_1 = 1`, `x_2 = (-a_1/a_2)^(1/d)`.
pub fn solve_diagonal_real(eq: &DiagonalEquation<RealAlg>) -> Result<Vec<RealAlg>> {
    let n = eq.len();
    if n < 2 {
        return Err(Error::not_found(
            "real diagonal",
            "a single term a x^d vanishes only at x = 0",
        ));
    }
    let a = eq.coeffs();
    let ratio = a[0].neg().div(&a[1]).expect("nonzero coefficient");
    let mut x = vec![RealAlg::zero(); n];
    x[0] = RealAlg::one();
    x[1] = ratio.odd_root(eq.degree())?;
    if eq.evaluate(&x).is_zero_exact() != Some(true) {
        return Err(Error::Verification("real diagonal solution".into()));
    }
    Ok(x)
}

/// Largest number of partial sums kept by the meet-in-the-middle search.
const TABLE_LIMIT: u128 = 1 << 21;

fn integer_coefficients(a: &[Q]) -> Vec<BigInt> {
    let l = Q::from_integer(denominator_lcm(a));
    a.iter().map(|c| (c * &l).to_integer()).collect()
}

/// Nonzero rational zero of a diagonal form, by a pair shortcut and then a
/// meet-in-the-middle search over integer vectors of bounded height.
///
/// A `NotFound` result says nothing about solvability.
pub fn solve_diagonal_rational(eq: &DiagonalEquation<Q>, budget: &SolverBudget) -> Result<Vec<Q>> {
    budget.validate()?;
    let n = eq.len();
    let d = eq.degree();
    let a = eq.coeffs();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(r) = exact_root(&(-&a[i] / &a[j]), d) {
                let mut x = vec![<Q as Scalar>::zero(); n];
                x[i] = <Q as Scalar>::one();
                x[j] = r;
                return Ok(x);
            }
        }
    }
    if n < 3 {
        return Err(Error::not_found(
            "rational diagonal",
            "no pair of coefficients has a rational d-th root ratio",
        ));
    }
    let ints = integer_coefficients(a);
    let ints: Option<Vec<i128>> = ints.iter().map(|c| c.to_i128()).collect();
    let ints = ints.ok_or_else(|| Error::not_found("rational diagonal", "coefficients too large"))?;
    let (left, right) = (n / 2, n - n / 2);
    let mut heights: Vec<u64> = vec![1, 2, 3, 4];
    while *heights.last().unwrap() < budget.height_bound {
        let next = heights.last().unwrap() * 2;
        heights.push(next);
    }
    heights.retain(|&h| h < budget.height_bound);
    heights.push(budget.height_bound);
    let mut tried = 0;
    for h in heights {
        if (2 * h as u128 + 1).pow(left as u32) > TABLE_LIMIT {
            break;
        }
        tried = h;
        if let Some(x) = mitm(&ints, d, h as i64, left, right) {
            return Ok(x.into_iter().map(|v| Q::from_integer(v.into())).collect());
        }
    }
    Err(Error::not_found(
        "rational diagonal",
        format!("no integer zero with entries up to {tried}"),
    ))
}

fn ipow(x: i64, d: u32) -> Option<i128> {
    (x as i128).checked_pow(d)
}

/// Calls `visit` on every vector in `[-h, h]^len` with its weighted sum.
fn enumerate(coeffs: &[i128], d: u32, h: i64, mut visit: impl FnMut(&[i64], i128) -> bool) {
    let len = coeffs.len();
    let pows: Vec<Vec<Option<i128>>> = coeffs
        .iter()
        .map(|c| (-h..=h).map(|x| ipow(x, d).and_then(|p| p.checked_mul(*c))).collect())
        .collect();
    let mut idx = vec![0usize; len];
    let width = (2 * h + 1) as usize;
    loop {
        let mut sum: Option<i128> = Some(0);
        for (k, &i) in idx.iter().enumerate() {
            sum = sum.and_then(|s| pows[k][i].and_then(|p| s.checked_add(p)));
        }
        if let Some(s) = sum {
            let x: Vec<i64> = idx.iter().map(|&i| i as i64 - h).collect();
            if !visit(&x, s) {
                return;
            }
        }
        let mut k = 0;
        loop {
            if k == len {
                return;
            }
            idx[k] += 1;
            if idx[k] < width {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn mitm(coeffs: &[i128], d: u32, h: i64, left: usize, right: usize) -> Option<Vec<i64>> {
    let (lc, rc) = coeffs.split_at(left);
    debug_assert_eq!(rc.len(), right);
    let mut table: HashMap<i128, Vec<i64>> = HashMap::new();
    enumerate(lc, d, h, |x, s| {
        if x.iter().any(|&v| v != 0) {
            table.entry(s).or_insert_with(|| x.to_vec());
        }
        true
    });
    let mut found = None;
    enumerate(rc, d, h, |y, s| {
        let nonzero_right = y.iter().any(|&v| v != 0);
        if nonzero_right && s == 0 {
            let mut x = vec![0; left];
            x.extend_from_slice(y);
            found = Some(x);
            return false;
        }
        if let Some(x) = table.get(&-s) {
            let mut v = x.clone();
            v.extend_from_slice(y);
            found = Some(v);
            return false;
        }
        true
    });
    found.map(primitive)
}

fn primitive(mut x: Vec<i64>) -> Vec<i64> {
    let g = x.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
    if g > 1 {
        for v in &mut x {
            *v /= g;
        }
    }
    if x.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
        for v in &mut x {
            *v = -*v;
        }
    }
    x
}

/// Dispatches to the oracle for `field`. Coefficients are given as
/// rational functions; over `Q` and `R` they must be constants.
pub fn solve_diagonal(
    field: BirchField,
    coeffs: &[RatFunc],
    d: u32,
    budget: &SolverBudget,
) -> Result<DiagonalSolution> {
    let constants = || -> Result<Vec<Q>> {
        coeffs
            .iter()
            .map(|c| {
                c.as_rational().ok_or_else(|| {
                    Error::contract(format!("coefficient `{c}` is not a constant of {field}"))
                })
            })
            .collect()
    };
    match field {
        BirchField::Rationals => {
            let eq = DiagonalEquation::new(constants()?, d)?;
            solve_diagonal_rational(&eq, budget).map(DiagonalSolution::Rational)
        }
        BirchField::RealClosed => {
            let eq = DiagonalEquation::new(constants()?.into_iter().map(RealAlg::rational).collect(), d)?;
            solve_diagonal_real(&eq).map(DiagonalSolution::Real)
        }
        BirchField::RealFunctionField { p } => {
            let eq = DiagonalEquation::new(coeffs.to_vec(), d)?;
            let sol = solve_diagonal_function_field(&eq, budget)?;
            if sol.p > p {
                return Err(Error::contract(format!(
                    "coefficients use {} parameters but the field has {p}",
                    sol.p
                )));
            }
            Ok(DiagonalSolution::FunctionField(sol))
        }
    }
}

/// True when the rational vector is a nonzero zero of the form.
pub fn is_rational_zero(eq: &DiagonalEquation<Q>, x: &[Q]) -> bool {
    x.len() == eq.len() && x.iter().any(|v| !Scalar::is_zero(v)) && Scalar::is_zero(&eq.evaluate(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    fn eq(c: &[i64], d: u32) -> DiagonalEquation<Q> {
        DiagonalEquation::new(c.iter().map(|&v| qf(v)).collect(), d).unwrap()
    }

    #[test]
    fn pair_shortcut() {
        let e = eq(&[1, 8, 5], 3);
        let x = solve_diagonal_rational(&e, &SolverBudget::default()).unwrap();
        assert_eq!(x, vec![qf(1), q(-1, 2), qf(0)]);
    }

    #[test]
    fn search_finds_sum_of_cubes() {
        // 3^3 + 4^3 + 5^3 = 6^3
        let e = eq(&[1, 1, 1, -1], 3);
        let x = solve_diagonal_rational(&e, &SolverBudget::default()).unwrap();
        assert!(is_rational_zero(&e, &x));
        let e = eq(&[1, 2, 3], 3);
        let x = solve_diagonal_rational(&e, &SolverBudget::default()).unwrap();
        assert!(is_rational_zero(&e, &x));
    }

    #[test]
    fn single_term_fails() {
        let e = eq(&[3], 3);
        assert!(solve_diagonal_rational(&e, &SolverBudget::default()).unwrap_err().is_not_found());
    }

    #[test]
    fn real_closed_form() {
        let e = DiagonalEquation::new(vec![RealAlg::rational(qf(2)), RealAlg::rational(qf(3))], 5).unwrap();
        let x = solve_diagonal_real(&e).unwrap();
        assert!(e.evaluate(&x).is_zero_exact().unwrap());
        assert!(x[1].to_f64() < 0.0);
    }
}
