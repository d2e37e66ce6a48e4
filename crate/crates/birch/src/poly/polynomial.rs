use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::Monomial;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};

/// A sparse multivariate polynomial in `nvars` variables.
///
/// Terms are kept in a map ordered by the graded-lexicographic monomial
/// order and never hold a structurally zero coefficient.
#[derive(Clone, Debug)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> PartialEq for Polynomial<F>
where
    F: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Scalar> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    /// The coordinate function `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        Self::monomial(nvars, Monomial::var(var, 1), F::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        assert!(m.support_len() <= nvars, "monomial outside context");
        let mut p = Self::zero(nvars);
        p.add_term(m, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; like terms are merged.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert!(
                e.len() <= nvars || e[nvars..].iter().all(|&x| x == 0),
                "exponent vector longer than context"
            );
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    /// The linear form `sum coeffs[i] * x_i`.
    pub fn linear(coeffs: &[F]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i, 1), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Semantic zero test; `None` when some coefficient is undecidable.
    pub fn is_zero_exact(&self) -> Option<bool> {
        let mut undecided = false;
        for c in self.terms.values() {
            match c.is_zero_exact() {
                Some(false) => return Some(false),
                None => undecided = true,
                Some(true) => {}
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    /// Exact identity test `self == other`.
    pub fn equals_exact(&self, other: &Self) -> bool {
        self.sub(other).is_zero_exact() == Some(true)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Leading term in graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.support_len() <= self.nvars);
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Drops coefficients that are semantically zero. Only relevant for
    /// kinds whose structural zero test is incomplete.
    pub fn prune_exact(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.is_zero_exact() != Some(true))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different contexts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut acc: HashMap<Monomial, F> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let prod = c1.mul(c2);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Evaluates at a point given in the same field.
    pub fn evaluate(&self, point: &[F]) -> Result<F> {
        if point.len() != self.nvars {
            return Err(Error::contract(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        Ok(self.eval_with(point))
    }

    fn eval_with(&self, point: &[F]) -> F {
        let mut powers: HashMap<(usize, u32), F> = HashMap::new();
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| point[i].pow(e))
                    .clone();
                t = t.mul(&p);
            }
            total = total.add(&t);
        }
        total
    }

    /// Formal partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.dense(self.nvars);
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c.mul(&F::from_i64(e as i64)));
        }
        out
    }

    /// All formal partial derivatives.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// `g(x_1..x_l) = f(sum x_i * columns[i])`, a polynomial in `l` fresh
    /// variables.
    pub fn substitute_linear(&self, columns: &[Vec<F>]) -> Result<Self> {
        for (k, col) in columns.iter().enumerate() {
            if col.len() != self.nvars {
                return Err(Error::contract(format!(
                    "column {} has {} entries, expected {}",
                    k,
                    col.len(),
                    self.nvars
                )));
            }
        }
        let l = columns.len();
        // image of each ambient coordinate u_j = sum_i columns[i][j] x_i
        let images: Vec<Polynomial<F>> = (0..self.nvars)
            .map(|j| {
                let coeffs: Vec<F> = columns.iter().map(|col| col[j].clone()).collect();
                let mut p = Polynomial::linear(&coeffs);
                p.nvars = l;
                p
            })
            .collect();
        Ok(self.compose(&images, l))
    }

    /// Substitutes `x_i -> images[i]`, all images living in `nvars_out`
    /// variables.
    pub fn compose(&self, images: &[Polynomial<F>], nvars_out: usize) -> Polynomial<F> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut powers: HashMap<(usize, u32), Polynomial<F>> = HashMap::new();
        let mut out = Polynomial::zero(nvars_out);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(nvars_out, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                t = t.mul(&p);
                if t.is_zero() {
                    break;
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitutes values for some variables, keeping the context.
    pub fn partial_evaluate(&self, values: &[(usize, F)]) -> Self {
        let mut map: Vec<Option<F>> = vec![None; self.nvars];
        for (i, v) in values {
            map[*i] = Some(v.clone());
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.dense(self.nvars);
            let mut coef = c.clone();
            for (i, e) in exps.iter_mut().enumerate() {
                if *e > 0 {
                    if let Some(v) = &map[i] {
                        coef = coef.mul(&v.pow(*e));
                        *e = 0;
                    }
                }
            }
            out.add_term(Monomial::new(exps), coef);
        }
        out
    }

    /// Moves variable `i` to position `map[i]` in a context of `nvars_out`.
    pub fn remap(&self, map: &[usize], nvars_out: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        assert!(map.iter().all(|&m| m < nvars_out));
        let mut out = Self::zero(nvars_out);
        for (m, c) in &self.terms {
            out.add_term(m.remap(map), c.clone());
        }
        out
    }

    /// Same polynomial viewed in a larger context (new variables appended).
    pub fn extend(&self, nvars_out: usize) -> Self {
        assert!(nvars_out >= self.nvars);
        Polynomial {
            nvars: nvars_out,
            terms: self.terms.clone(),
        }
    }

    /// Drops variables past `nvars_out`; they must not occur.
    pub fn shrink(&self, nvars_out: usize) -> Self {
        assert!(self.terms.keys().all(|m| m.support_len() <= nvars_out));
        Polynomial {
            nvars: nvars_out,
            terms: self.terms.clone(),
        }
    }

    /// Coefficients of the monomials in `vars` with everything else kept as
    /// coefficient polynomial.
    pub fn collect_in(&self, vars: &[usize]) -> BTreeMap<Vec<u32>, Polynomial<F>> {
        let mut out: BTreeMap<Vec<u32>, Polynomial<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = vars.iter().map(|&v| m.exponent(v)).collect();
            let mut rest = m.dense(self.nvars);
            for &v in vars {
                rest[v] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(Monomial::new(rest), c.clone());
        }
        out
    }

    /// Coefficients listed as dense exponent vectors.
    pub fn to_dense_terms(&self) -> Vec<(Vec<u32>, F)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.dense(self.nvars), c.clone()))
            .collect()
    }
}

impl Polynomial<Q> {
    /// Exact division by a nonzero polynomial; `None` if it leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial<Q>) -> Option<Polynomial<Q>> {
        let (quot, rem) = self.div_rem(divisor)?;
        rem.is_zero().then_some(quot)
    }

    /// Multivariate division by a single divisor in graded-lexicographic
    /// order. `None` when the divisor is zero.
    pub fn div_rem(&self, divisor: &Polynomial<Q>) -> Option<(Polynomial<Q>, Polynomial<Q>)> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        let mut done = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lm) {
                Some(qm) => {
                    let qc = &c / &lc;
                    quot.add_term(qm.clone(), qc.clone());
                    rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
                }
                None => {
                    done.add_term(m.clone(), c);
                    rem.terms.remove(&m);
                }
            }
        }
        Some((quot, done))
    }
}

impl<F: Scalar> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", super::format_polynomial(self, &names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Polynomial<Q> {
        Polynomial::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), qf(*c))))
    }

    #[test]
    fn evaluate_examples() {
        let f = p(2, &[(&[3, 0], 1), (&[0, 3], 1)]);
        assert_eq!(f.evaluate(&[qf(1), qf(-1)]).unwrap(), qf(0));
        let g = p(1, &[(&[2], 1)]);
        assert_eq!(g.evaluate(&[qf(3)]).unwrap(), qf(9));
        let h = p(2, &[(&[1, 1], 1), (&[0, 2], 2)]);
        assert_eq!(h.evaluate(&[qf(1), qf(2)]).unwrap(), qf(10));
        assert!(h.evaluate(&[qf(1)]).is_err());
    }

    #[test]
    fn substitute_linear_examples() {
        let f = p(2, &[(&[1, 1], 1)]);
        let g = f
            .substitute_linear(&[vec![qf(1), qf(0)], vec![qf(0), qf(1)]])
            .unwrap();
        assert_eq!(g, p(2, &[(&[1, 1], 1)]));
        let f = p(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(
            f.substitute_linear(&[vec![qf(1), qf(1)]]).unwrap(),
            p(1, &[(&[2], 2)])
        );
        let f = p(1, &[(&[3], 1)]);
        assert_eq!(
            f.substitute_linear(&[vec![qf(2)]]).unwrap(),
            p(1, &[(&[3], 8)])
        );
        assert!(f.substitute_linear(&[vec![qf(2), qf(1)]]).is_err());
    }

    #[test]
    fn gradient_examples() {
        let f = p(1, &[(&[3], 1)]);
        assert_eq!(f.gradient(), vec![p(1, &[(&[2], 3)])]);
        let f = p(2, &[(&[1, 1], 1)]);
        assert_eq!(f.gradient(), vec![p(2, &[(&[0, 1], 1)]), p(2, &[(&[1], 1)])]);
    }

    #[test]
    fn division_recovers_factor() {
        let a = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(2, &[(&[2, 0], 1), (&[1, 1], -1), (&[0, 2], 1)]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.add(&Polynomial::one(2)).exact_div(&a), None);
        let half = Polynomial::constant(2, q(1, 2));
        assert_eq!(a.mul(&half).exact_div(&half), Some(a));
    }
}
