//! Witnessed decompositions `f = sum g_i h_i` and a bounded search for them.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::SolverBudget;
use crate::linalg::solve;
use crate::poly::{Monomial, Polynomial, UPoly};
use crate::scalar::{Scalar, Q};

/// `target = sum g_i h_i` with every factor homogeneous of degree below
/// `deg target`. Witnesses `str(target) <= pairs.len()`.
#[derive(Clone, Debug)]
pub struct DecompositionCertificate<F> {
    pub target: Polynomial<F>,
    pub pairs: Vec<(Polynomial<F>, Polynomial<F>)>,
}

impl<F: Scalar> DecompositionCertificate<F> {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn verify(&self) -> bool {
        verify_decomposition(self).is_ok()
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionDefect {
    TargetNotHomogeneous,
    /// Pair `index` has a factor that is zero, inhomogeneous, or of
    /// degree not below the target's.
    FactorDegree { index: usize },
    SumMismatch,
}

impl fmt::Display for DecompositionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionDefect::TargetNotHomogeneous => write!(f, "target is not homogeneous"),
            DecompositionDefect::FactorDegree { index } => {
                write!(f, "pair {index} violates the degree constraints")
            }
            DecompositionDefect::SumMismatch => write!(f, "sum of products differs from the target"),
        }
    }
}

/// Checks the identity exactly, from scratch.
pub fn verify_decomposition<F: Scalar>(
    cert: &DecompositionCertificate<F>,
) -> std::result::Result<(), DecompositionDefect> {
    let f = &cert.target;
    if !f.is_homogeneous() {
        return Err(DecompositionDefect::TargetNotHomogeneous);
    }
    let d = f.degree();
    let mut sum = Polynomial::zero(f.nvars());
    for (index, (g, h)) in cert.pairs.iter().enumerate() {
        let bad = || DecompositionDefect::FactorDegree { index };
        let (Some(dg), Some(dh), Some(d)) = (g.degree(), h.degree(), d) else {
            return Err(bad());
        };
        if !g.is_homogeneous() || !h.is_homogeneous() || dg >= d || dh >= d || dg + dh != d {
            return Err(bad());
        }
        if g.nvars() != f.nvars() || h.nvars() != f.nvars() {
            return Err(bad());
        }
        sum = sum.add(&g.mul(h));
    }
    if sum.sub(f).is_zero_exact() == Some(true) {
        Ok(())
    } else {
        Err(DecompositionDefect::SumMismatch)
    }
}

fn support_vars(f: &Polynomial<Q>) -> Vec<usize> {
    f.support()
}

/// Linear change on the variables `vars`: `x_{vars[i]} -> sum_j t[i][j] x_{vars[j]}`.
fn linear_change(f: &Polynomial<Q>, vars: &[usize], t: &[Vec<Q>]) -> Polynomial<Q> {
    let n = f.nvars();
    let mut images: Vec<Polynomial<Q>> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    for (i, &vi) in vars.iter().enumerate() {
        let mut img = Polynomial::zero(n);
        for (j, &vj) in vars.iter().enumerate() {
            if !Scalar::is_zero(&t[i][j]) {
                img.add_term(Monomial::var(vj, 1), t[i][j].clone());
            }
        }
        images[vi] = img;
    }
    f.compose(&images, n)
}

fn invert(t: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let k = t.len();
    let cols: Vec<Vec<Q>> = (0..k)
        .map(|c| {
            let e: Vec<Q> = (0..k).map(|r| Q::from_i64((r == c) as i64)).collect();
            solve(&t.to_vec(), &e).expect("unitriangular")
        })
        .collect();
    (0..k).map(|r| (0..k).map(|c| cols[c][r].clone()).collect()).collect()
}

/// A linear form `l` and cofactor `h` with `f = l h`, if `f` has a linear
/// factor over `Q`.
///
/// After a linear change making the coefficient `c` of `y_0^d` nonzero,
/// every linear factor has the shape `y_0 - sum a_j y_j`, and `a_j` is a
/// rational root of `t -> f(t e_0 + e_j)`. Candidates are pruned on the
/// points `e_1 + e_j` and confirmed by exact division.
pub fn find_linear_factor(
    f: &Polynomial<Q>,
    budget: &SolverBudget,
) -> Option<(Polynomial<Q>, Polynomial<Q>)> {
    let n = f.nvars();
    let d = f.degree()?;
    if d < 2 || !f.is_homogeneous() {
        return None;
    }
    let vars = support_vars(f);
    for &v in &vars {
        if f.terms().all(|(m, _)| m.exponent(v) > 0) {
            let l = Polynomial::var(n, v);
            let h = f.exact_div(&l)?;
            return Some((l, h));
        }
    }
    let k = vars.len();
    let mut rng = budget.rng(0x51);
    for attempt in 0..budget.restarts.max(1) {
        let mut t: Vec<Vec<Q>> = (0..k)
            .map(|i| (0..k).map(|j| Q::from_i64((i == j) as i64)).collect())
            .collect();
        if attempt > 0 {
            for (i, row) in t.iter_mut().enumerate() {
                for entry in row.iter_mut().skip(i + 1) {
                    *entry = Q::from_i64(rng.gen_range(-2..=2));
                }
            }
        }
        let g = linear_change(f, &vars, &t);
        let pivot = Monomial::var(vars[0], d);
        if Scalar::is_zero(&g.coeff(&pivot)) {
            continue;
        }
        let restrict = |point: &[Q]| -> UPoly<Q> {
            // t -> g(t e_0 + point)
            let mut images: Vec<Polynomial<Q>> = vec![Polynomial::zero(1); n];
            let mut img0 = Polynomial::var(1, 0);
            img0.add_term(Monomial::one(), point[0].clone());
            images[vars[0]] = img0;
            for (j, &vj) in vars.iter().enumerate().skip(1) {
                images[vj] = Polynomial::constant(1, point[j].clone());
            }
            let r = g.compose(&images, 1);
            let mut c = vec![Q::from_i64(0); d as usize + 1];
            for (m, v) in r.terms() {
                c[m.exponent(0) as usize] = v.clone();
            }
            UPoly::new(c)
        };
        let unit = |j: usize| -> Vec<Q> { (0..k).map(|i| Q::from_i64((i == j) as i64)).collect() };
        let mut cands: Vec<Vec<Q>> = Vec::with_capacity(k);
        cands.push(Vec::new());
        for j in 1..k {
            let roots = restrict(&unit(j)).rational_roots();
            if roots.is_empty() {
                return None;
            }
            cands.push(roots);
        }
        let mut found = None;
        let mut checks = 0usize;
        let mut chosen = vec![Q::from_i64(0); k];
        search(&cands, 1, &mut chosen, &mut |a: &[Q], j: usize| {
            if j <= 1 {
                return true;
            }
            let mut p = unit(1);
            p[j] = Q::from_i64(1);
            let s = &a[1] + &a[j];
            restrict(&p).eval(&s).numer().sign() == num_bigint::Sign::NoSign
        }, &mut |a: &[Q]| {
            checks += 1;
            if checks > 4096 {
                return true;
            }
            let mut ly = Polynomial::var(n, vars[0]);
            for j in 1..k {
                if !Scalar::is_zero(&a[j]) {
                    ly.add_term(Monomial::var(vars[j], 1), -a[j].clone());
                }
            }
            if g.exact_div(&ly).is_some() {
                found = Some(ly);
                return true;
            }
            false
        });
        let ly = found?;
        let lx = linear_change(&ly, &vars, &invert(&t));
        let h = f.exact_div(&lx)?;
        return Some((lx, h));
    }
    None
}

/// Depth-first choice of one candidate per position, with a pairwise
/// filter; `accept` returns true to stop.
fn search(
    cands: &[Vec<Q>],
    j: usize,
    chosen: &mut Vec<Q>,
    keep: &mut impl FnMut(&[Q], usize) -> bool,
    accept: &mut impl FnMut(&[Q]) -> bool,
) -> bool {
    if j == cands.len() {
        return accept(chosen);
    }
    for c in &cands[j] {
        chosen[j] = c.clone();
        if keep(chosen, j) && search(cands, j + 1, chosen, keep, accept) {
            return true;
        }
    }
    false
}

/// Connected components of the graph joining variables that share a
/// monomial.
pub(crate) fn variable_components(forms: &[&Polynomial<Q>], n: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut used = vec![false; n];
    for f in forms {
        for (m, _) in f.terms() {
            let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
            for &v in &vars {
                used[v] = true;
            }
            for w in vars.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        if used[v] {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Smallest set of variables meeting every monomial, up to `max` of them,
/// turned into pairs `(x_v, quotient)`.
fn hitting_set_pairs(f: &Polynomial<Q>, max: usize) -> Option<Vec<(Polynomial<Q>, Polynomial<Q>)>> {
    let n = f.nvars();
    let vars = support_vars(f);
    let monos: Vec<Vec<usize>> = f
        .terms()
        .map(|(m, _)| (0..n).filter(|&i| m.exponent(i) > 0).collect())
        .collect();
    for size in 1..=max.min(vars.len()) {
        for idx in subsets(vars.len(), size) {
            let set: Vec<usize> = idx.iter().map(|&i| vars[i]).collect();
            if !monos.iter().all(|m| m.iter().any(|v| set.contains(v))) {
                continue;
            }
            let mut quotients = vec![Polynomial::zero(n); size];
            for (m, c) in f.terms() {
                let k = set.iter().position(|&v| m.exponent(v) > 0).expect("hit");
                let q = m.div(&Monomial::var(set[k], 1)).expect("divisible");
                quotients[k].add_term(q, c.clone());
            }
            return Some(
                set.iter()
                    .zip(quotients)
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(&v, q)| (Polynomial::var(n, v), q))
                    .collect(),
            );
        }
    }
    None
}

/// All `size`-element subsets of `0..len`, lexicographically.
pub(crate) fn subsets(len: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            if len - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, len, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, size, &mut Vec::new(), &mut out);
    out
}

fn restrict_to(f: &Polynomial<Q>, vars: &[usize]) -> Polynomial<Q> {
    let mut out = Polynomial::zero(f.nvars());
    for (m, c) in f.terms() {
        if (0..f.nvars()).all(|i| m.exponent(i) == 0 || vars.contains(&i)) {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

fn best_for_component(
    f: &Polynomial<Q>,
    max: usize,
    budget: &SolverBudget,
) -> Option<Vec<(Polynomial<Q>, Polynomial<Q>)>> {
    if max == 0 {
        return None;
    }
    if let Some((l, h)) = find_linear_factor(f, budget) {
        return Some(vec![(l, h)]);
    }
    hitting_set_pairs(f, max)
}

/// Bounded search for a decomposition with at most `max_terms` pairs.
///
/// Tries, in order: a linear factor of `f`; then, on each connected
/// component of the variable graph, a linear factor or a small set of
/// variables meeting every monomial. `Ok(None)` means nothing was found,
/// not that none exists.
pub fn decomposition_search(
    f: &Polynomial<Q>,
    max_terms: usize,
    budget: &SolverBudget,
) -> Result<Option<DecompositionCertificate<Q>>> {
    if !f.is_homogeneous() {
        return Err(Error::contract("decomposition search needs a homogeneous form"));
    }
    let cert = |pairs| DecompositionCertificate {
        target: f.clone(),
        pairs,
    };
    if f.is_zero() {
        return Ok(Some(cert(Vec::new())));
    }
    if f.degree().unwrap_or(0) < 2 {
        return Err(Error::contract("decomposition search needs degree at least 2"));
    }
    if max_terms == 0 {
        return Ok(None);
    }
    if let Some((l, h)) = find_linear_factor(f, budget) {
        let c = cert(vec![(l, h)]);
        debug_assert!(c.verify());
        return Ok(Some(c));
    }
    let comps = variable_components(&[f], f.nvars());
    let mut pairs = Vec::new();
    for comp in &comps {
        let part = restrict_to(f, comp);
        let left = max_terms.saturating_sub(pairs.len());
        let Some(p) = best_for_component(&part, left, budget) else {
            return Ok(None);
        };
        pairs.extend(p);
        if pairs.len() > max_terms {
            return Ok(None);
        }
    }
    let c = cert(pairs);
    if !c.verify() {
        return Err(Error::Verification("decomposition search produced a bad certificate".into()));
    }
    Ok(Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{ExtElem, ExtField};
    use crate::poly::{parse_polynomial, VarNames};

    fn names() -> VarNames {
        VarNames::new(["x", "y", "z", "w", "u", "v"].map(String::from).to_vec())
    }

    fn poly(s: &str) -> Polynomial<Q> {
        parse_polynomial(s, Some(&names())).unwrap().0
    }

    #[test]
    fn verifies_examples() {
        let c = DecompositionCertificate {
            target: poly("x*y"),
            pairs: vec![(poly("x"), poly("y"))],
        };
        assert!(c.verify());
        let c = DecompositionCertificate {
            target: poly("x^3 + y^3"),
            pairs: vec![(poly("x + y"), poly("x^2 - x*y + y^2"))],
        };
        assert!(c.verify());
        let bad = DecompositionCertificate {
            target: poly("x^3 + y^3"),
            pairs: vec![(poly("x + y"), poly("x^2 + y^2"))],
        };
        assert_eq!(verify_decomposition(&bad), Err(DecompositionDefect::SumMismatch));
        let bad = DecompositionCertificate {
            target: poly("x^3"),
            pairs: vec![(poly("1"), poly("x^3"))],
        };
        assert_eq!(verify_decomposition(&bad), Err(DecompositionDefect::FactorDegree { index: 0 }));
    }

    #[test]
    fn gaussian_product() {
        let k = ExtField::new(UPoly::from_ints(&[1, 0, 1])).unwrap();
        let i = k.generator();
        let lift = |p: &Polynomial<Q>| p.map_coeffs(ExtElem::from_rational);
        let x = lift(&poly("x"));
        let y = lift(&poly("y"));
        let iy = y.scale(&i);
        let c = DecompositionCertificate {
            target: lift(&poly("x^2 + y^2")),
            pairs: vec![(x.add(&iy), x.sub(&iy))],
        };
        assert!(c.verify());
    }

    #[test]
    fn finds_factors() {
        let b = SolverBudget::default();
        let c = decomposition_search(&poly("x^2*y + y^3"), 1, &b).unwrap().unwrap();
        assert_eq!(c.len(), 1);
        let c = decomposition_search(&poly("x^3 + y^3"), 1, &b).unwrap().unwrap();
        assert_eq!(c.len(), 1);
        let c = decomposition_search(&poly("(2*x - y + 3*z)*(x^2 + y*z + z^2)"), 1, &b)
            .unwrap()
            .unwrap();
        assert_eq!(c.len(), 1);
        let c = decomposition_search(&poly("x*y*z + w*u*v"), 2, &b).unwrap().unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn irreducible_cubic_needs_more() {
        let b = SolverBudget::default();
        let f = poly("x^3 + 2*y^3 + 3*z^3 + x*y*z + x^2*z - y^2*x");
        assert!(decomposition_search(&f, 1, &b).unwrap().is_none());
    }
}
