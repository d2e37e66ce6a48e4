//! Tsen's reduction for `R(t1..tp)`: expand every unknown as a polynomial
//! in the parameters with real coefficients and collect by parameter
//! monomials. The result is a system over `R` with more unknowns than
//! equations once the expansion degree is large enough.

use super::{solve_real_odd_system, DiagonalEquation, SolverBudget};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{Interval, RatFunc, RealAlg, Scalar, Q};

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Smallest `s >= 0` with `n * C(s+p, p) > C(r + d*s + p, p)`.
pub fn choose_expansion_degree(n: usize, r: usize, d: u32, p: usize) -> Result<usize> {
    let bound = (d as u128).pow(p as u32);
    if (n as u128) <= bound {
        return Err(Error::unsupported(format!(
            "{n} variables do not exceed d^p = {bound}; Tsen's argument needs N = d^p + 1 = {}",
            bound + 1
        )));
    }
    let (n, r, d, p) = (n as u128, r as u64, d as u64, p as u64);
    for s in 0u64.. {
        let vars = n * binomial(s + p, p);
        let eqs = binomial(r + d * s + p, p);
        if vars > eqs {
            return Ok(s as usize);
        }
    }
    unreachable!("n > d^p makes the inequality hold eventually")
}

/// All exponent vectors in `p` variables with total degree at most `max`,
/// by degree and then lexicographically.
pub fn multi_indices(p: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=max {
        let mut cur = vec![0u32; p];
        fill(&mut out, &mut cur, 0, total);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(cur.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

fn poly_lcm(a: &Polynomial<Q>, b: &Polynomial<Q>) -> Polynomial<Q> {
    let g = crate::poly::poly_gcd(a, b);
    a.mul(b).exact_div(&g).expect("gcd divides")
}

/// Multiplies a form over `Q(t1..tp)` by the lcm of its coefficient
/// denominators. The result lives in `n + p` variables: the `n` unknowns
/// followed by the parameters.
pub fn clear_denominators(f: &Polynomial<RatFunc>) -> (Polynomial<Q>, usize) {
    let n = f.nvars();
    let p = f
        .terms()
        .map(|(_, c)| c.numer().nvars().max(c.denom().nvars()))
        .max()
        .unwrap_or(0);
    let widen = |q: &Polynomial<Q>| if q.nvars() < p { q.extend(p) } else { q.clone() };
    let mut l = Polynomial::one(p);
    for (_, c) in f.terms() {
        l = poly_lcm(&l, &widen(c.denom()));
    }
    // integer content of the cleared coefficients is harmless; keep lcm monic
    let mut out = Polynomial::zero(n + p);
    for (m, c) in f.terms() {
        let scaled = widen(c.numer())
            .mul(&l.exact_div(&widen(c.denom())).expect("lcm is a multiple"));
        for (tm, tc) in scaled.terms() {
            let mut exps = m.dense(n);
            exps.extend(tm.dense(p));
            out.add_term(Monomial::new(exps), tc.clone());
        }
    }
    (out, p)
}

/// Rebuilds a form over `Q(t)` from a polynomial in `n` unknowns followed
/// by parameters.
pub fn split_parameters(f: &Polynomial<Q>, n: usize) -> Polynomial<RatFunc> {
    let p = f.nvars() - n;
    let mut grouped: std::collections::BTreeMap<Vec<u32>, Polynomial<Q>> = Default::default();
    for (m, c) in f.terms() {
        let e = m.dense(n + p);
        let (x, t) = e.split_at(n);
        grouped
            .entry(x.to_vec())
            .or_insert_with(|| Polynomial::zero(p))
            .add_term(Monomial::new(t.to_vec()), c.clone());
    }
    let mut out = Polynomial::zero(n);
    for (x, c) in grouped {
        out.add_term(Monomial::new(x), RatFunc::from_poly(c));
    }
    out
}

/// Output of [`tsen_reduce`].
#[derive(Clone, Debug)]
pub struct TsenReduction {
    pub n: usize,
    pub p: usize,
    pub degree: u32,
    pub s: usize,
    /// Largest parameter degree of a cleared coefficient.
    pub coeff_degree: u32,
    /// Exponents `a` with `|a| <= s`; unknown `y_{i,a}` has index
    /// `i * expansion.len() + k` where `expansion[k] = a`.
    pub expansion: Vec<Vec<u32>>,
    /// `(i, a)` for every fresh real unknown, in index order.
    pub variable_map: Vec<(usize, Vec<u32>)>,
    /// Parameter monomial whose coefficient each equation is.
    pub equation_index: Vec<Vec<u32>>,
    pub real_system: Vec<Polynomial<Q>>,
    /// The cleared form in unknowns followed by parameters.
    pub cleared: Polynomial<Q>,
}

/// Substitutes `x_i = sum_{|a| <= s} y_{i,a} t^a` and collects by
/// parameter monomials.
pub fn tsen_reduce(f: &Polynomial<RatFunc>, s: usize) -> Result<TsenReduction> {
    let n = f.nvars();
    let (cleared, p) = clear_denominators(f);
    let xvars: Vec<usize> = (0..n).collect();
    let tvars: Vec<usize> = (n..n + p).collect();
    let mut degree = None;
    let mut coeff_degree = 0;
    for (m, _) in cleared.terms() {
        let dx = m.degree_in(&xvars);
        if *degree.get_or_insert(dx) != dx {
            return Err(Error::contract("form is not homogeneous in the unknowns"));
        }
        coeff_degree = coeff_degree.max(m.degree_in(&tvars));
    }
    let degree = degree.ok_or_else(|| Error::contract("zero form"))?;
    if degree % 2 == 0 {
        return Err(Error::contract("Tsen reduction is applied to odd degree forms"));
    }
    let expansion = multi_indices(p, s as u32);
    let m = expansion.len();
    let ny = n * m;
    let total = ny + p;
    let mut images = Vec::with_capacity(n + p);
    for i in 0..n {
        let mut img = Polynomial::zero(total);
        for (k, a) in expansion.iter().enumerate() {
            let mut e = vec![0u32; total];
            e[i * m + k] = 1;
            e[ny..].copy_from_slice(a);
            img.add_term(Monomial::new(e), <Q as Scalar>::one());
        }
        images.push(img);
    }
    for j in 0..p {
        images.push(Polynomial::var(total, ny + j));
    }
    let g = cleared.compose(&images, total);
    let tv: Vec<usize> = (ny..total).collect();
    let collected = g.collect_in(&tv);
    let equation_index = multi_indices(p, coeff_degree + degree * s as u32);
    let real_system = equation_index
        .iter()
        .map(|b| {
            collected
                .get(b)
                .map(|c| c.shrink(ny))
                .unwrap_or_else(|| Polynomial::zero(ny))
        })
        .collect();
    let variable_map = (0..n)
        .flat_map(|i| expansion.iter().map(move |a| (i, a.clone())))
        .collect();
    Ok(TsenReduction {
        n,
        p,
        degree,
        s,
        coeff_degree,
        expansion,
        variable_map,
        equation_index,
        real_system,
        cleared,
    })
}

impl TsenReduction {
    pub fn num_unknowns(&self) -> usize {
        self.variable_map.len()
    }

    /// Maps real values of the fresh unknowns back to polynomials in the
    /// parameters.
    pub fn lift<F: Scalar>(&self, y: &[F]) -> Vec<Polynomial<F>> {
        let m = self.expansion.len();
        (0..self.n)
            .map(|i| {
                let mut x = Polynomial::zero(self.p);
                for (k, a) in self.expansion.iter().enumerate() {
                    x.add_term(Monomial::new(a.clone()), y[i * m + k].clone());
                }
                x
            })
            .collect()
    }
}

/// Substitutes polynomial coordinates in the parameters into a cleared
/// form (unknowns followed by parameters).
pub fn evaluate_in_parameters<F: Scalar>(
    cleared: &Polynomial<Q>,
    n: usize,
    coords: &[Polynomial<F>],
) -> Polynomial<F> {
    let p = cleared.nvars() - n;
    let mut images: Vec<Polynomial<F>> = coords.to_vec();
    for j in 0..p {
        images.push(Polynomial::var(p, j));
    }
    crate::poly::lift::<F>(cleared).compose(&images, p)
}

/// A solution over `R(t1..tp)`: polynomial coordinates, exact when the
/// real leaf solved exactly, always with interval enclosures.
#[derive(Clone, Debug)]
pub struct FunctionFieldSolution {
    pub p: usize,
    pub exact: Option<Vec<Polynomial<RealAlg>>>,
    pub enclosure: Vec<Polynomial<Interval>>,
    /// Coefficients of `f(x(t))` in the parameters, as intervals.
    pub residual: Vec<Interval>,
    /// Expansion degree used, `None` for the constant-ratio shortcut.
    pub s: Option<usize>,
    pub method: &'static str,
}

impl FunctionFieldSolution {
    pub fn max_residual(&self) -> Q {
        self.residual
            .iter()
            .map(|iv| iv.magnitude())
            .max()
            .unwrap_or_default()
    }

    pub fn is_certified(&self, tol: &Q) -> bool {
        self.residual.iter().all(|iv| iv.contains_zero() && &iv.magnitude() <= tol)
    }
}

fn residual_intervals(cleared: &Polynomial<Q>, n: usize, coords: &[Polynomial<Interval>]) -> Vec<Interval> {
    let r = evaluate_in_parameters(cleared, n, coords);
    r.terms().map(|(_, c)| c.clone()).collect()
}

fn enclose(p: &Polynomial<RealAlg>) -> Polynomial<Interval> {
    p.map_coeffs(|c| c.enclosure().expect("real"))
}

/// Nonzero zero of a diagonal form over `R(t1..tp)`.
pub fn solve_diagonal_function_field(
    eq: &DiagonalEquation<RatFunc>,
    budget: &SolverBudget,
) -> Result<FunctionFieldSolution> {
    let n = eq.len();
    let d = eq.degree();
    let f = crate::poly::diagonal_form(eq.coeffs(), d);
    let (cleared, p) = clear_denominators(&f);
    // shortcut: a constant ratio -a_i/a_j has a real d-th root
    for i in 0..n {
        for j in i + 1..n {
            let ratio = eq.coeffs()[i].neg().div(&eq.coeffs()[j]).expect("nonzero");
            if ratio.numer().degree().unwrap_or(0) == 0 && ratio.denom().degree().unwrap_or(0) == 0 {
                let value = ratio.as_rational().expect("constant");
                let root = RealAlg::rational(value).odd_root(d)?;
                let mut xs = vec![RealAlg::zero(); n];
                xs[i] = RealAlg::one();
                xs[j] = root;
                let coords: Vec<Polynomial<RealAlg>> =
                    xs.iter().map(|x| Polynomial::constant(p, x.clone())).collect();
                let enclosure: Vec<_> = coords.iter().map(enclose).collect();
                let exact_res = evaluate_in_parameters(&cleared, n, &coords);
                if exact_res.is_zero_exact() != Some(true) {
                    return Err(Error::Verification("constant-ratio shortcut".into()));
                }
                return Ok(FunctionFieldSolution {
                    p,
                    residual: residual_intervals(&cleared, n, &enclosure),
                    exact: Some(coords),
                    enclosure,
                    s: None,
                    method: "constant ratio",
                });
            }
        }
    }
    let xvars: Vec<usize> = (0..n).collect();
    let r = cleared
        .terms()
        .map(|(m, _)| m.degree() - m.degree_in(&xvars))
        .max()
        .unwrap_or(0);
    let s = choose_expansion_degree(n, r as usize, d, p)?;
    let red = tsen_reduce(&f, s)?;
    let sol = solve_real_odd_system(&red.real_system, budget)?;
    let exact = sol.exact.as_ref().map(|y| red.lift(y));
    let enclosure = match &exact {
        Some(c) => c.iter().map(enclose).collect(),
        None => red.lift(&sol.point),
    };
    if let Some(c) = &exact {
        if evaluate_in_parameters(&cleared, n, c).is_zero_exact() != Some(true) {
            return Err(Error::Verification("Tsen lift is not an exact zero".into()));
        }
    }
    let residual = residual_intervals(&cleared, n, &enclosure);
    let out = FunctionFieldSolution {
        p,
        exact,
        enclosure,
        residual,
        s: Some(s),
        method: sol.method,
    };
    if out.exact.is_none() && !out.is_certified(&budget.residual_tol) {
        return Err(Error::not_found(
            "Tsen reduction",
            "real leaf solution did not certify within tolerance",
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    #[test]
    fn expansion_degree_examples() {
        assert_eq!(choose_expansion_degree(4, 0, 3, 1).unwrap(), 0);
        assert_eq!(choose_expansion_degree(4, 3, 3, 1).unwrap(), 1);
        assert_eq!(choose_expansion_degree(10, 0, 3, 2).unwrap(), 0);
        assert!(choose_expansion_degree(3, 0, 3, 1).is_err());
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 2).len(), 6);
        assert_eq!(multi_indices(1, 3), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(multi_indices(0, 2), vec![Vec::<u32>::new()]);
    }

    fn rf(coeffs: &[(i64, u32)]) -> RatFunc {
        let mut p = Polynomial::zero(1);
        for &(c, e) in coeffs {
            p.add_term(Monomial::var(0, e), qf(c));
        }
        RatFunc::from_poly(p)
    }

    #[test]
    fn reduction_splits_by_parameter_degree() {
        // t x1^3 - x2^3 with s = 0 gives {-y2^3, y1^3}
        let mut f = Polynomial::zero(2);
        f.add_term(Monomial::var(0, 3), rf(&[(1, 1)]));
        f.add_term(Monomial::var(1, 3), rf(&[(-1, 0)]));
        let red = tsen_reduce(&f, 0).unwrap();
        assert_eq!(red.real_system.len(), 2);
        assert_eq!(red.real_system[0], Polynomial::monomial(2, Monomial::var(1, 3), qf(-1)));
        assert_eq!(red.real_system[1], Polynomial::monomial(2, Monomial::var(0, 3), qf(1)));
    }

    #[test]
    fn constant_ratio_shortcut() {
        let eq = DiagonalEquation::new(vec![rf(&[(1, 1)]), rf(&[(1, 1)])], 3).unwrap();
        let sol = solve_diagonal_function_field(&eq, &SolverBudget::default()).unwrap();
        let x = sol.exact.unwrap();
        assert_eq!(x[1].coeff(&Monomial::one()).as_rational(), Some(qf(-1)));
    }
}
