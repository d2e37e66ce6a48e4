//! Nonzero real zeros of systems of odd degree forms with more unknowns
//! than equations.
//!
//! Exact paths come first: systems linear in the `d`-th powers of the
//! unknowns, and single equations (restricted to a random line, an odd
//! degree univariate polynomial has a real root). Everything else goes to a
//! multistart damped Newton iteration on the unit sphere, whose output is
//! certified by interval evaluation and, when possible, rationalized.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use super::SolverBudget;
use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::poly::{lift, Monomial, Polynomial, UPoly};
use crate::scalar::{continued_fraction_reconstruct, rational_from_f64, Interval, RealAlg, Scalar, Q};

/// A certified real zero.
#[derive(Clone, Debug)]
pub struct RealSolution {
    /// Enclosure of each coordinate.
    pub point: Vec<Interval>,
    pub approx: Vec<f64>,
    /// Enclosure of every form at `point`.
    pub residuals: Vec<Interval>,
    pub exact: Option<Vec<RealAlg>>,
    pub rational: Option<Vec<Q>>,
    pub method: &'static str,
}

impl RealSolution {
    fn from_exact(forms: &[Polynomial<Q>], x: Vec<RealAlg>, method: &'static str) -> Result<Self> {
        for f in forms {
            let v = lift::<RealAlg>(f).evaluate(&x)?;
            if v.is_zero_exact() != Some(true) {
                return Err(Error::Verification(format!("{method} solution is not an exact zero")));
            }
        }
        let width = Q::new(1.into(), BigInt::from(1u64) << 80);
        let point: Vec<Interval> = x.iter().map(|v| v.enclosure_within(&width)).collect();
        let residuals = forms
            .iter()
            .map(|f| lift::<Interval>(f).evaluate(&point))
            .collect::<Result<_>>()?;
        let rational = x.iter().map(|v| v.as_rational()).collect();
        Ok(RealSolution {
            approx: x.iter().map(|v| v.to_f64()).collect(),
            point,
            residuals,
            exact: Some(x),
            rational,
            method,
        })
    }

    pub fn max_residual(&self) -> Q {
        self.residuals.iter().map(|r| r.magnitude()).max().unwrap_or_default()
    }
}

fn check_forms(forms: &[Polynomial<Q>]) -> Result<(usize, Vec<Polynomial<Q>>)> {
    let n = forms.first().map(|f| f.nvars()).unwrap_or(0);
    let mut live = Vec::new();
    for f in forms {
        if f.nvars() != n {
            return Err(Error::contract("forms must share one variable set"));
        }
        if f.is_zero() {
            continue;
        }
        if !f.is_homogeneous() || f.degree().unwrap_or(0) % 2 == 0 {
            return Err(Error::contract("every form must be homogeneous of odd degree"));
        }
        live.push(f.clone());
    }
    if n <= live.len() {
        return Err(Error::contract(format!(
            "{} nonzero forms in {n} unknowns; need more unknowns than forms",
            live.len()
        )));
    }
    Ok((n, live))
}

/// Nonzero real zero of homogeneous odd degree forms in `n > r` unknowns.
pub fn solve_real_odd_system(forms: &[Polynomial<Q>], budget: &SolverBudget) -> Result<RealSolution> {
    budget.validate()?;
    let (n, live) = check_forms(forms)?;
    if live.is_empty() {
        let mut x = vec![RealAlg::zero(); n];
        x[0] = RealAlg::one();
        return RealSolution::from_exact(forms, x, "trivial");
    }
    if let Some(x) = power_linear(n, &live)? {
        return RealSolution::from_exact(forms, x, "power-linear");
    }
    if live.len() == 1 {
        let x = line_restriction(n, &live[0], budget)?;
        return RealSolution::from_exact(forms, x, "line restriction");
    }
    newton_multistart(n, &live, budget)
}

/// Systems where every monomial is `y_i^d` for one common `d` are linear
/// in the powers; take a rational kernel vector and its real `d`-th roots.
fn power_linear(n: usize, forms: &[Polynomial<Q>]) -> Result<Option<Vec<RealAlg>>> {
    let d = forms[0].degree().expect("nonzero");
    let mut rows = Vec::new();
    for f in forms {
        let mut row = vec![<Q as Scalar>::zero(); n];
        for (m, c) in f.terms() {
            let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
            if vars.len() != 1 || m.degree() != d {
                return Ok(None);
            }
            let i = vars[0];
            row[i] = c.clone();
        }
        rows.push(row);
    }
    let kernel = nullspace(&rows, n);
    let Some(k) = kernel.first() else {
        return Ok(None);
    };
    let x = k
        .iter()
        .map(|v| RealAlg::rational(v.clone()).odd_root(d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(x))
}

/// Restricts `f` to `p + s q` for random integer `p, q`; the univariate
/// restriction has odd degree when `f(q) != 0` and so a real root.
fn line_restriction(n: usize, f: &Polynomial<Q>, budget: &SolverBudget) -> Result<Vec<RealAlg>> {
    let mut rng = budget.rng(0x11);
    for _ in 0..budget.restarts {
        let p: Vec<Q> = (0..n).map(|_| super::random_int(&mut rng, 5)).collect();
        let qd: Vec<Q> = (0..n).map(|_| super::random_int(&mut rng, 5)).collect();
        let Some(u) = restrict_to_line(f, &p, &qd) else {
            continue;
        };
        let roots = u.isolate_real_roots();
        let Some((lo, hi)) = roots.first() else {
            continue;
        };
        let s = RealAlg::root_in(&u, lo, hi)?;
        let x: Vec<RealAlg> = p
            .iter()
            .zip(&qd)
            .map(|(a, b)| RealAlg::rational(a.clone()).add(&s.mul(&RealAlg::rational(b.clone()))))
            .collect();
        if x.iter().any(|v| v.is_zero_exact() == Some(false)) {
            return Ok(x);
        }
    }
    Err(Error::not_found("line restriction", "every sampled line degenerated"))
}

/// `f(p + s q)` as a polynomial in `s`, `None` when its degree drops.
pub(crate) fn restrict_to_line(f: &Polynomial<Q>, p: &[Q], q: &[Q]) -> Option<UPoly<Q>> {
    let images: Vec<Polynomial<Q>> = p
        .iter()
        .zip(q)
        .map(|(a, b)| {
            let mut img = Polynomial::constant(1, a.clone());
            img.add_term(Monomial::var(0, 1), b.clone());
            img
        })
        .collect();
    let g = f.compose(&images, 1);
    let d = f.degree()? as usize;
    let mut coeffs = vec![<Q as Scalar>::zero(); d + 1];
    for (m, c) in g.terms() {
        coeffs[m.exponent(0) as usize] = c.clone();
    }
    let u = UPoly::new(coeffs);
    (u.degree() == Some(d)).then_some(u)
}

/// Float copy of a polynomial for fast evaluation.
struct FloatPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPoly {
    fn new(f: &Polynomial<Q>) -> Self {
        let n = f.nvars();
        FloatPoly {
            terms: f
                .terms()
                .map(|(m, c)| (m.dense(n), c.to_f64().unwrap_or(0.0)))
                .collect(),
        }
    }

    fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut v = 0.0;
        let mut g = vec![0.0; x.len()];
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &ei) in x.iter().zip(e) {
                t *= xi.powi(ei as i32);
            }
            v += t;
            for i in 0..x.len() {
                if e[i] == 0 {
                    continue;
                }
                let mut dt = c * e[i] as f64;
                for (j, (xj, &ej)) in x.iter().zip(e).enumerate() {
                    let k = if j == i { ej - 1 } else { ej };
                    dt *= xj.powi(k as i32);
                }
                g[i] += dt;
            }
        }
        (v, g)
    }

    fn scale(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Solves the small dense system `a y = b` by Gaussian elimination.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let r = b.len();
    for col in 0..r {
        let piv = (col..r).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..r {
            let f = a[row][col] / a[col][col];
            for k in col..r {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut y = vec![0.0; r];
    for i in (0..r).rev() {
        let s: f64 = (i + 1..r).map(|k| a[i][k] * y[k]).sum();
        y[i] = (b[i] - s) / a[i][i];
    }
    Some(y)
}

fn residual(fs: &[FloatPoly], x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut vals = Vec::with_capacity(fs.len());
    let mut jac = Vec::with_capacity(fs.len());
    for f in fs {
        let (v, g) = f.eval_grad(x);
        let s = f.scale();
        vals.push(v / s);
        jac.push(g.into_iter().map(|gi| gi / s).collect());
    }
    (vals, jac)
}

/// Minimum-norm damped Gauss-Newton on the unit sphere.
fn newton_from(fs: &[FloatPoly], mut x: Vec<f64>, iters: u32) -> Option<Vec<f64>> {
    let r = fs.len();
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    for _ in 0..iters {
        let (f, j) = residual(fs, &x);
        let fnorm = norm(&f);
        if fnorm < 1e-15 {
            return Some(x);
        }
        let mut jjt = vec![vec![0.0; r]; r];
        for a in 0..r {
            for b in 0..r {
                jjt[a][b] = j[a].iter().zip(&j[b]).map(|(u, v)| u * v).sum();
            }
            jjt[a][a] += 1e-12;
        }
        let y = solve_dense(jjt, f.clone())?;
        let step: Vec<f64> = (0..x.len())
            .map(|i| -(0..r).map(|a| j[a][i] * y[a]).sum::<f64>())
            .collect();
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let mut cand: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + t * b).collect();
            let nc = norm(&cand);
            cand.iter_mut().for_each(|v| *v /= nc);
            if norm(&residual(fs, &cand).0) < fnorm {
                x = cand;
                improved = true;
                break;
            }
            t /= 2.0;
        }
        if !improved {
            break;
        }
    }
    let (f, _) = residual(fs, &x);
    (norm(&f) < 1e-12).then_some(x)
}

/// Rational enclosure of `sqrt(v)` for `v > 0`.
fn sqrt_enclosure(v: &Q) -> Interval {
    let f = v.to_f64().unwrap_or(1.0).sqrt();
    let mut lo = rational_from_f64(f * (1.0 - 1e-12)).expect("finite");
    let mut hi = rational_from_f64(f * (1.0 + 1e-12)).expect("finite");
    while &(&lo * &lo) > v {
        lo = &lo / Q::from_integer(2.into());
    }
    while &(&hi * &hi) < v {
        hi = &hi * Q::from_integer(2.into());
    }
    Interval::new(lo, hi)
}

/// Certifies a float point: the forms are evaluated exactly at its rational
/// value and divided by an interval enclosure of its norm power.
fn certify(forms: &[Polynomial<Q>], x: &[f64], budget: &SolverBudget) -> Option<RealSolution> {
    let xq: Vec<Q> = x.iter().map(|&v| rational_from_f64(v)).collect::<Option<_>>()?;
    let n2: Q = xq.iter().map(|v| v * v).sum();
    let nrm = sqrt_enclosure(&n2);
    let inv = nrm.inv()?;
    let point: Vec<Interval> = xq.iter().map(|v| Interval::point(v.clone()).mul(&inv)).collect();
    let mut residuals = Vec::with_capacity(forms.len());
    for f in forms {
        let val = f.evaluate(&xq).ok()?;
        let d = f.degree().unwrap_or(0);
        let r = Interval::point(val).mul(&inv.powi(d));
        if r.magnitude() > budget.residual_tol {
            return None;
        }
        residuals.push(r);
    }
    let rational = reconstruct(forms, x, budget);
    let exact = rational
        .as_ref()
        .map(|v| v.iter().cloned().map(RealAlg::rational).collect());
    Some(RealSolution {
        point,
        approx: x.to_vec(),
        residuals,
        exact,
        rational,
        method: "newton",
    })
}

/// Scales by the largest coordinate, rounds each ratio to a low height
/// rational, and keeps the result only if it is an exact zero.
fn reconstruct(forms: &[Polynomial<Q>], x: &[f64], budget: &SolverBudget) -> Option<Vec<Q>> {
    let big = x.iter().cloned().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if big == 0.0 {
        return None;
    }
    let h = BigInt::from(budget.height_bound.max(1000));
    let ratios: Vec<Q> = x
        .iter()
        .map(|&v| {
            let r = v / big;
            if r.abs() < 1e-12 {
                Some(<Q as Scalar>::zero())
            } else {
                continued_fraction_reconstruct(&rational_from_f64(r)?, &h)
            }
        })
        .collect::<Option<_>>()?;
    forms
        .iter()
        .all(|f| f.evaluate(&ratios).map(|v| Scalar::is_zero(&v)).unwrap_or(false))
        .then_some(ratios)
}

fn newton_multistart(n: usize, forms: &[Polynomial<Q>], budget: &SolverBudget) -> Result<RealSolution> {
    let fs: Vec<FloatPoly> = forms.iter().map(FloatPoly::new).collect();
    let mut rng = budget.rng(0x22);
    for _ in 0..budget.restarts {
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if norm(&x0) < 1e-3 {
            continue;
        }
        if let Some(x) = newton_from(&fs, x0, budget.newton_iters) {
            if let Some(sol) = certify(forms, &x, budget) {
                return Ok(sol);
            }
        }
    }
    Err(Error::not_found(
        "real odd system",
        format!("{} Newton restarts did not certify a zero", budget.restarts),
    ))
}

/// Runs only the numeric path, for callers that want to exercise it.
pub fn solve_real_odd_system_numeric(forms: &[Polynomial<Q>], budget: &SolverBudget) -> Result<RealSolution> {
    budget.validate()?;
    let (n, live) = check_forms(forms)?;
    if live.is_empty() {
        return solve_real_odd_system(forms, budget);
    }
    let mut sol = newton_multistart(n, &live, budget)?;
    sol.residuals = forms
        .iter()
        .map(|f| lift::<Interval>(f).evaluate(&sol.point))
        .collect::<Result<_>>()?;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::scalar::q;

    fn poly(s: &str, names: &crate::poly::VarNames) -> Polynomial<Q> {
        parse_polynomial(s, Some(names)).unwrap().0
    }

    fn names(n: usize) -> crate::poly::VarNames {
        crate::poly::VarNames::new(crate::poly::default_names(n))
    }

    #[test]
    fn power_linear_is_exact() {
        let v = names(3);
        let fs = vec![poly("x1^3 + 2*x2^3 - x3^3", &v), poly("x1^3 - x2^3", &v)];
        let s = solve_real_odd_system(&fs, &SolverBudget::default()).unwrap();
        assert_eq!(s.method, "power-linear");
        assert!(s.exact.is_some());
    }

    #[test]
    fn single_cubic_by_line() {
        let v = names(3);
        let fs = vec![poly("x1^3 + x1*x2*x3 + 2*x2^2*x3 + 5*x3^3", &v)];
        let s = solve_real_odd_system(&fs, &SolverBudget::default()).unwrap();
        assert_eq!(s.method, "line restriction");
    }

    #[test]
    fn newton_certifies_two_cubics() {
        let v = names(4);
        let fs = vec![
            poly("x1^3 + x2*x3*x4 - 2*x4^3 + x1*x2^2", &v),
            poly("x2^3 - x1*x3^2 + 3*x1*x2*x4 + x3^3", &v),
        ];
        let s = solve_real_odd_system(&fs, &SolverBudget::default()).unwrap();
        assert_eq!(s.method, "newton");
        assert!(s.max_residual() <= q(1, 1_000_000_000));
        let width = s.point.iter().map(|iv| iv.width()).max().unwrap();
        assert!(width < q(1, 1_000_000));
    }

    #[test]
    fn rejects_square_systems() {
        let v = names(1);
        let fs = vec![poly("x1^3", &v)];
        assert!(matches!(
            solve_real_odd_system(&fs, &SolverBudget::default()),
            Err(Error::Contract(_))
        ));
    }
}
