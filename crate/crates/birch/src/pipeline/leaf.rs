//! Leaf solvers: exact points on small systems over a base field, found by
//! seeded sampling and checked exactly.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{solve_real_odd_system, BaseScalar, DiagonalEquation, SolverBudget};
use crate::linalg::{nullspace, rank};
use crate::poly::{Monomial, Polynomial, UPoly};
use crate::scalar::{RealScalar, Scalar, Q};

pub(crate) type Accept<'a, F> = &'a dyn Fn(&[F]) -> bool;

pub(crate) fn int<F: Scalar>(k: i64) -> F {
    F::from_rational(&Q::from_integer(k.into()))
}

/// Nonzero integer vector with entries in `[-h, h]`.
pub(crate) fn random_vector<F: Scalar>(rng: &mut impl Rng, n: usize, h: i64) -> Vec<F> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-h..=h)).collect();
        if v.iter().any(|&x| x != 0) || n == 0 {
            return v.into_iter().map(int).collect();
        }
    }
}

pub(crate) fn is_zero_vec<F: Scalar>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero() || x.is_zero_exact() == Some(true))
}

pub(crate) fn sign<F: RealScalar>(x: &F) -> i32 {
    x.signum().unwrap_or(0)
}

/// `sum_j s_j basis_j`.
pub(crate) fn combine<F: Scalar>(basis: &[Vec<F>], s: &[F], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (b, c) in basis.iter().zip(s) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o = o.add(&x.mul(c));
        }
    }
    out
}

/// Linear independence. Vectors with a coordinate where every other
/// remaining vector vanishes are peeled off first, which avoids mixing
/// entries from unrelated number fields; the rest goes to exact rank.
pub(crate) fn independent<F: Scalar>(vs: &[Vec<F>]) -> bool {
    let nz = |x: &F| !(x.is_zero() || x.is_zero_exact() == Some(true));
    let mut rest: Vec<&Vec<F>> = vs.iter().collect();
    loop {
        let n = rest.first().map_or(0, |v| v.len());
        let private = (0..rest.len()).find(|&k| {
            (0..n).any(|c| nz(&rest[k][c]) && rest.iter().enumerate().all(|(j, v)| j == k || !nz(&v[c])))
        });
        match private {
            Some(k) => {
                rest.remove(k);
            }
            None => break,
        }
    }
    match rest.len() {
        0 => true,
        1 => rest[0].iter().any(nz),
        k => rank(&rest.into_iter().cloned().collect()) == k,
    }
}

fn unit<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut e = vec![F::zero(); n];
    e[i] = F::one();
    e
}

/// `f(p + t (q - p))` as a polynomial in `t`.
pub(crate) fn restrict_to_segment<F: Scalar>(f: &Polynomial<F>, p: &[F], q: &[F]) -> UPoly<F> {
    let images: Vec<Polynomial<F>> = p
        .iter()
        .zip(q)
        .map(|(a, b)| {
            let mut img = Polynomial::constant(1, a.clone());
            img.add_term(Monomial::var(0, 1), b.sub(a));
            img
        })
        .collect();
    let g = f.compose(&images, 1);
    let d = f.degree().unwrap_or(0) as usize;
    let mut coeffs = vec![F::zero(); d + 1];
    for (m, c) in g.terms() {
        coeffs[m.exponent(0) as usize] = c.clone();
    }
    UPoly::new(coeffs)
}

/// Coefficients of `f` when it is `sum c_i x_i^d`; absent variables get 0.
pub(crate) fn diagonal_coeffs<F: Scalar>(f: &Polynomial<F>) -> Option<(Vec<F>, u32)> {
    let n = f.nvars();
    let d = f.degree()?;
    let mut c = vec![F::zero(); n];
    for (m, v) in f.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
        match vars.as_slice() {
            [i] if m.degree() == d => c[*i] = v.clone(),
            _ => return None,
        }
    }
    Some((c, d))
}

/// Zero of one diagonal form through the field's diagonal oracle, trying
/// rotations of the coordinates until `accept` holds.
fn solve_single_diagonal<F: BaseScalar>(
    coeffs: &[F],
    d: u32,
    accept: Accept<F>,
    budget: &SolverBudget,
) -> Option<Vec<F>> {
    let n = coeffs.len();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            let e = unit(n, i);
            if accept(&e) {
                return Some(e);
            }
        }
    }
    let live: Vec<usize> = (0..n).filter(|&i| !coeffs[i].is_zero()).collect();
    if live.len() < 2 {
        return None;
    }
    for shift in 0..live.len() {
        let order: Vec<usize> = (0..live.len()).map(|k| live[(k + shift) % live.len()]).collect();
        let eq = DiagonalEquation::new(order.iter().map(|&i| coeffs[i].clone()).collect(), d).ok()?;
        let Ok(y) = F::solve_diagonal_eq(&eq, budget) else {
            continue;
        };
        let mut x = vec![F::zero(); n];
        for (k, &i) in order.iter().enumerate() {
            x[i] = y[k].clone();
        }
        if accept(&x) {
            return Some(x);
        }
    }
    None
}

/// A nonzero zero of one form with `accept` holding: diagonal oracle, then
/// a sign change along a sampled segment and an exact root on it.
pub(crate) fn solve_single<F: BaseScalar>(
    f: &Polynomial<F>,
    accept: Accept<F>,
    rng: &mut impl Rng,
    budget: &SolverBudget,
) -> Result<Vec<F>> {
    let n = f.nvars();
    let ok = |x: &[F]| !is_zero_vec(x) && accept(x);
    if f.is_zero() {
        for _ in 0..budget.restarts {
            let x = random_vector(rng, n, 3);
            if ok(&x) {
                return Ok(x);
            }
        }
        return Err(Error::not_found("leaf solve", "no sampled point passed the side conditions"));
    }
    let d = f.degree().unwrap_or(0);
    if d == 1 {
        let row: Vec<F> = (0..n).map(|i| f.coeff(&Monomial::var(i, 1))).collect();
        let basis = nullspace(&vec![row], n);
        for _ in 0..budget.restarts {
            let s = random_vector(rng, basis.len(), 3);
            let x = combine(&basis, &s, n);
            if ok(&x) {
                return Ok(x);
            }
        }
        return Err(Error::not_found("leaf solve", "linear leaf: side conditions failed"));
    }
    if let Some((c, d)) = diagonal_coeffs(f) {
        if let Some(x) = solve_single_diagonal(&c, d, &ok, budget) {
            return Ok(x);
        }
    }
    for _ in 0..budget.restarts {
        let p: Vec<F> = random_vector(rng, n, 3);
        let sp = sign(&f.evaluate(&p)?);
        if sp == 0 {
            if ok(&p) {
                return Ok(p);
            }
            continue;
        }
        let mut other = None;
        for _ in 0..8 {
            let q: Vec<F> = random_vector(rng, n, 3);
            let sq = sign(&f.evaluate(&q)?);
            if sq == -sp {
                other = Some(q);
            } else if sq == sp && d % 2 == 1 {
                other = Some(q.iter().map(|x| x.neg()).collect());
            }
            if other.as_ref().is_some_and(|q| independent(&[p.clone(), q.clone()])) {
                break;
            }
            other = None;
        }
        let Some(q) = other else {
            continue;
        };
        let poly = restrict_to_segment(f, &p, &q);
        let Ok(t) = F::root_between(&poly, &Q::from_integer(0.into()), &Q::from_integer(1.into())) else {
            continue;
        };
        let x: Vec<F> = p.iter().zip(&q).map(|(a, b)| a.add(&t.mul(&b.sub(a)))).collect();
        if ok(&x) {
            return Ok(x);
        }
    }
    Err(Error::not_found("leaf solve", "no sign change with an admissible root"))
}

/// A nonzero common zero of `forms` (all in the same variables) with
/// `accept` holding. Linear forms are eliminated exactly; one remaining
/// form goes to [`solve_single`]; several go to the real system solver
/// when their coefficients are rational.
pub(crate) fn solve_leaf<F: BaseScalar>(
    n: usize,
    forms: &[Polynomial<F>],
    accept: Accept<F>,
    rng: &mut impl Rng,
    budget: &SolverBudget,
) -> Result<Vec<F>> {
    let live: Vec<&Polynomial<F>> = forms.iter().filter(|f| !f.is_zero()).collect();
    let linear: Vec<Vec<F>> = live
        .iter()
        .filter(|f| f.degree() == Some(1))
        .map(|f| (0..n).map(|i| f.coeff(&Monomial::var(i, 1))).collect())
        .collect();
    let basis: Vec<Vec<F>> = if linear.is_empty() {
        (0..n).map(|i| unit(n, i)).collect()
    } else {
        nullspace(&linear, n)
    };
    if basis.is_empty() {
        return Err(Error::not_found("leaf solve", "linear conditions force zero"));
    }
    let k = basis.len();
    let mut rest = Vec::new();
    for f in live.iter().filter(|f| f.degree() != Some(1)) {
        let g = f.substitute_linear(&basis)?;
        if !g.is_zero() {
            rest.push(g);
        }
    }
    let lifted = |s: &[F]| combine(&basis, s, n);
    let acc = |s: &[F]| accept(&lifted(s));
    let s = match rest.len() {
        0 => solve_single(&Polynomial::zero(k), &acc, rng, budget)?,
        1 => solve_single(&rest[0], &acc, rng, budget)?,
        _ => solve_several(&rest, &acc, budget)?,
    };
    Ok(lifted(&s))
}

fn solve_several<F: BaseScalar>(forms: &[Polynomial<F>], accept: Accept<F>, budget: &SolverBudget) -> Result<Vec<F>> {
    let rational: Option<Vec<Polynomial<Q>>> = forms
        .iter()
        .map(|f| {
            let mut out = Polynomial::zero(f.nvars());
            for (m, c) in f.terms() {
                out.add_term(m.clone(), c.as_rational()?);
            }
            Some(out)
        })
        .collect();
    let Some(rational) = rational else {
        return Err(Error::not_found(
            "leaf solve",
            "several nonlinear conditions with irrational coefficients",
        ));
    };
    for attempt in 0..budget.restarts.min(4) {
        let b = SolverBudget {
            seed: budget.seed.wrapping_add(attempt as u64),
            ..budget.clone()
        };
        let Ok(sol) = solve_real_odd_system(&rational, &b) else {
            continue;
        };
        if let Some(x) = F::from_real_solution(&sol) {
            if !is_zero_vec(&x) && accept(&x) && forms.iter().all(|f| f.evaluate(&x).is_ok_and(|v| v.is_zero())) {
                return Ok(x);
            }
        }
    }
    Err(Error::not_found("leaf solve", "no exact point for several nonlinear conditions"))
}

/// A vector `v` with `f_k(v) != 0` and `f_j(v) = 0` for `j != k`, all
/// conditions checked exactly.
pub fn select_vanishing_vector<F: BaseScalar>(
    forms: &[Polynomial<F>],
    k: usize,
    budget: &SolverBudget,
) -> Result<Vec<F>> {
    let Some(target) = forms.get(k) else {
        return Err(Error::contract(format!("distinguished index {k} out of range")));
    };
    let n = target.nvars();
    if forms.iter().any(|f| f.nvars() != n) {
        return Err(Error::contract("forms must share one variable set"));
    }
    let others: Vec<Polynomial<F>> =
        forms.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, f)| f.clone()).collect();
    let accept = |v: &[F]| target.evaluate(v).is_ok_and(|x| !x.is_zero());
    let mut rng = budget.rng(0x5e1ec7 + k as u64);
    let v = solve_leaf(n, &others, &accept, &mut rng, budget)?;
    let holds = others.iter().all(|f| f.evaluate(&v).is_ok_and(|x| x.is_zero())) && accept(&v);
    if !holds {
        return Err(Error::Verification("selected vector fails its conditions".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VarNames};
    use crate::poly::lift;
    use crate::scalar::RealAlg;

    fn poly(s: &str) -> Polynomial<RealAlg> {
        let names = VarNames::new(["x", "y", "z"].map(String::from).to_vec());
        lift(&parse_polynomial(s, Some(&names)).unwrap().0)
    }

    #[test]
    fn vanishing_vector_examples() {
        let b = SolverBudget::default();
        let v = select_vanishing_vector(&[poly("x^3 + y^3"), poly("x^3 - y^3")], 0, &b).unwrap();
        assert!(v[0].sub(&v[1]).is_zero());
        let v = select_vanishing_vector(&[poly("x^3"), poly("y^3")], 1, &b).unwrap();
        assert!(v[0].is_zero() && !v[1].is_zero());
        let v = select_vanishing_vector(&[poly("x^3 + 2*y^3 + z^3")], 0, &b).unwrap();
        assert!(!poly("x^3 + 2*y^3 + z^3").evaluate(&v).unwrap().is_zero());
    }

    #[test]
    fn single_dense_cubic_by_segment() {
        let f = poly("x^3 + x*y*z + 2*y^2*z - z^3");
        let mut rng = SolverBudget::default().rng(1);
        let x = solve_single(&f, &|_| true, &mut rng, &SolverBudget::default()).unwrap();
        assert!(f.evaluate(&x).unwrap().is_zero());
        assert!(!is_zero_vec(&x));
    }

    #[test]
    fn indefinite_quadric() {
        let f = poly("x^2 + y^2 - 3*z^2");
        let mut rng = SolverBudget::default().rng(2);
        let x = solve_single(&f, &|_| true, &mut rng, &SolverBudget::default()).unwrap();
        assert!(f.evaluate(&x).unwrap().is_zero());
    }
}
