//! Diagonal specialization: vectors `v, w` with
//! `f(xv + yw) = x y^(d-1) + a y^d` for a diagonal form `f`.

use crate::error::{Error, Result};
use crate::fields::{BaseScalar, DiagonalEquation, SolverBudget};
use crate::linalg::nullspace;
use crate::poly::{diagonal_form, BlockGrading, Monomial, Polynomial};
use crate::scalar::{Scalar, Q};

use super::leaf::{independent, int};
use super::multihom::{solve_multihomogeneous, MultihomSystem};

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Forms `f^1..f^d` on `K^r x K^r` (variables `alpha_1..alpha_r`, then
/// `beta_1..beta_r`) with
/// `f^j = C(d, j) sum_i c_i u_i^(d-j) alpha_i^(d-j) beta_i^j`, where block
/// `i` contributes the coefficient and null vector entry at its
/// distinguished position.
#[derive(Clone, Debug)]
pub struct BihomSystem<F> {
    pub degree: u32,
    /// Full coefficient and null vector of each block.
    pub block_coeffs: Vec<Vec<F>>,
    pub block_nulls: Vec<Vec<F>>,
    /// Position `m` in each block with `u_{i,m} != 0`.
    pub distinguished: Vec<usize>,
    /// `forms[j - 1] = f^j`.
    pub forms: Vec<Polynomial<F>>,
}

impl<F: Scalar> BihomSystem<F> {
    pub fn blocks(&self) -> usize {
        self.block_coeffs.len()
    }

    /// Coordinates of `sum_i alpha_i u_i` and `sum_i beta_i e_{i,m}` in the
    /// concatenated block coordinates.
    pub fn vectors(&self, alpha: &[F], beta: &[F]) -> (Vec<F>, Vec<F>) {
        let mut v = Vec::new();
        let mut w = Vec::new();
        for i in 0..self.blocks() {
            for (j, u) in self.block_nulls[i].iter().enumerate() {
                v.push(alpha[i].mul(u));
                w.push(if j == self.distinguished[i] { beta[i].clone() } else { F::zero() });
            }
        }
        (v, w)
    }

    /// `f(x v + y w) = sum_j f^j x^(d-j) y^j` with `f(v) = 0`, checked
    /// symbolically in `alpha, beta, x, y`.
    pub fn cross_check(&self) -> bool {
        let r = self.blocks();
        let d = self.degree;
        let coeffs: Vec<F> = self.block_coeffs.concat();
        let f = diagonal_form(&coeffs, d);
        let total = 2 * r + 2;
        let (x, y) = (2 * r, 2 * r + 1);
        let mut images = Vec::new();
        for i in 0..r {
            for (j, u) in self.block_nulls[i].iter().enumerate() {
                let mut img = Polynomial::zero(total);
                img.add_term(two(total, i, x), u.clone());
                if j == self.distinguished[i] {
                    img.add_term(two(total, r + i, y), F::one());
                }
                images.push(img);
            }
        }
        let g = f.compose(&images, total);
        let pieces = g.collect_in(&[x, y]);
        let mut ok = pieces.get(&vec![d, 0]).is_none_or(|p| p.is_zero_exact() == Some(true));
        for j in 1..=d {
            let got = pieces.get(&vec![d - j, j]).cloned().unwrap_or_else(|| Polynomial::zero(total));
            ok &= got.sub(&self.forms[j as usize - 1].extend(total)).is_zero_exact() == Some(true);
        }
        ok
    }
}

fn two(n: usize, a: usize, b: usize) -> Monomial {
    let mut e = vec![0; n];
    e[a] += 1;
    e[b] += 1;
    Monomial::new(e)
}

/// Builds `f^1..f^d` from per-block coefficients `c` and null vectors `u`
/// (`sum_j c_{i,j} u_{i,j}^d = 0`). The distinguished position of a block
/// is its last nonzero null vector entry.
pub fn build_bihomogeneous_system<F: Scalar>(c: &[Vec<F>], u: &[Vec<F>], d: u32) -> Result<BihomSystem<F>> {
    if c.len() != u.len() || c.is_empty() {
        return Err(Error::contract("one null vector per block"));
    }
    let r = c.len();
    let mut distinguished = Vec::with_capacity(r);
    for (i, (ci, ui)) in c.iter().zip(u).enumerate() {
        if ci.len() != ui.len() {
            return Err(Error::contract(format!("block {i}: null vector has the wrong length")));
        }
        let value = ci.iter().zip(ui).fold(F::zero(), |acc, (a, x)| acc.add(&a.mul(&x.pow(d))));
        if value.is_zero_exact() != Some(true) {
            return Err(Error::contract(format!("block {i}: u is not a zero of the block form")));
        }
        let m = (0..ui.len())
            .rev()
            .find(|&j| ui[j].is_zero_exact() == Some(false))
            .ok_or_else(|| Error::contract(format!("block {i}: null vector is zero")))?;
        distinguished.push(m);
    }
    let mut forms = Vec::with_capacity(d as usize);
    for j in 1..=d {
        let mut p = Polynomial::zero(2 * r);
        let binom: F = int(binomial(d, j));
        for i in 0..r {
            let m = distinguished[i];
            let coef = binom.mul(&c[i][m]).mul(&u[i][m].pow(d - j));
            let mut e = vec![0; 2 * r];
            e[i] = d - j;
            e[r + i] = j;
            p.add_term(Monomial::new(e), coef);
        }
        forms.push(p);
    }
    Ok(BihomSystem {
        degree: d,
        block_coeffs: c.to_vec(),
        block_nulls: u.to_vec(),
        distinguished,
        forms,
    })
}

/// `f(x v + y w) = x y^(d-1) + a y^d`.
#[derive(Clone, Debug)]
pub struct Specialization<F> {
    pub degree: u32,
    pub v: Vec<F>,
    pub w: Vec<F>,
    pub a: F,
    /// Coordinates of each block used.
    pub blocks: Vec<Vec<usize>>,
    pub bihom: Option<BihomSystem<F>>,
    pub alpha: Vec<F>,
    pub beta: Vec<F>,
    pub method: &'static str,
}

impl<F: Scalar> Specialization<F> {
    /// The identity in `x, y`, checked exactly, and independence of `v, w`
    /// for `d > 1`.
    pub fn verify(&self, eq: &DiagonalEquation<F>) -> bool {
        let d = eq.degree();
        let f = diagonal_form(eq.coeffs(), d);
        let Ok(g) = f.substitute_linear(&[self.v.clone(), self.w.clone()]) else {
            return false;
        };
        let mut expected = Polynomial::zero(2);
        expected.add_term(Monomial::new(vec![1, d - 1]), F::one());
        expected.add_term(Monomial::new(vec![0, d]), self.a.clone());
        let identity = g.sub(&expected).is_zero_exact() == Some(true);
        identity && (d == 1 || independent(&[self.v.clone(), self.w.clone()]))
    }
}

/// Pencil vectors for `f = sum c_i x_i^d`, `d` odd, all `c_i != 0`.
///
/// The first `blocks * m` coordinates are cut into blocks of the field's
/// diagonal size `m`; each block gets a null vector `u_i` from the
/// diagonal oracle. For `d = 3` the system `f^1 = 0`, `f^2 != 0` is solved
/// block by block (alpha free, beta linear), then alpha is divided by
/// `f^2(alpha, beta)`. For `d >= 5` that system has no block order, and
/// pairs are used instead: with `B_i` in the kernel of `(t_i^k)`,
/// `k = 1..d-2`, for fixed distinct `t_i`, block `i` gets
/// `v = ((-B_i/c_1)^(1/d), s_i)`, `w = (0, t_i s_i)`, `s_i = (B_i/c_2)^(1/d)`,
/// which contributes `B_i ((x + t_i y)^d - x^d)`.
pub fn specialize_diagonal<F: BaseScalar>(
    eq: &DiagonalEquation<F>,
    blocks: Option<usize>,
    budget: &SolverBudget,
) -> Result<Specialization<F>> {
    let d = eq.degree();
    let n = eq.len();
    let c = eq.coeffs();
    if d.is_multiple_of(2) {
        return Err(Error::contract("specialization needs odd degree"));
    }
    if c.iter().any(|x| x.is_zero()) {
        return Err(Error::contract("every diagonal coefficient must be nonzero"));
    }
    if d == 1 {
        if n < 2 {
            return Err(Error::contract("a linear pencil needs two variables"));
        }
        let mut v = vec![F::zero(); n];
        let mut w = vec![F::zero(); n];
        v[0] = c[0].inv().expect("nonzero");
        w[1] = F::one();
        let out = Specialization {
            degree: 1,
            v,
            w,
            a: c[1].clone(),
            blocks: vec![vec![0, 1]],
            bihom: None,
            alpha: Vec::new(),
            beta: Vec::new(),
            method: "linear",
        };
        return Ok(out);
    }
    let out = if d == 3 {
        pencil_by_blocks(eq, blocks, budget)?
    } else {
        pencil_by_pairs(eq, blocks)?
    };
    if !out.verify(eq) {
        return Err(Error::Verification("pencil identity".into()));
    }
    Ok(out)
}

fn block_count(requested: Option<usize>, n: usize, m: usize, target: usize) -> Result<usize> {
    let r = requested.unwrap_or_else(|| (n / m).clamp(1, target));
    if r == 0 || r * m > n {
        return Err(Error::contract(format!(
            "{r} block(s) of {m} coordinates need {} variables, have {n}",
            r * m
        )));
    }
    Ok(r)
}

fn pencil_by_blocks<F: BaseScalar>(
    eq: &DiagonalEquation<F>,
    blocks: Option<usize>,
    budget: &SolverBudget,
) -> Result<Specialization<F>> {
    let d = eq.degree();
    let n = eq.len();
    let m = F::field().nk_table(d).unwrap_or(3);
    let r = block_count(blocks, n, m, 2)?;
    let coords: Vec<Vec<usize>> = (0..r).map(|i| (i * m..(i + 1) * m).collect()).collect();
    let mut cs = Vec::new();
    let mut us = Vec::new();
    for block in &coords {
        let ci: Vec<F> = block.iter().map(|&j| eq.coeffs()[j].clone()).collect();
        let u = F::solve_diagonal_eq(&DiagonalEquation::new(ci.clone(), d)?, budget)?;
        cs.push(ci);
        us.push(u);
    }
    let bihom = build_bihomogeneous_system(&cs, &us, d)?;
    let grading = BlockGrading::consecutive(&[r, r]);
    let system = MultihomSystem::new(grading, bihom.forms[..d as usize - 2].to_vec(), None)?;
    let next = &bihom.forms[d as usize - 2];
    let point = solve_multihomogeneous(&system, Some(next), None, budget).map_err(|e| match e {
        Error::NotFound { .. } if r == 1 => Error::not_found(
            "diagonal specialization",
            "one block: f^1 = 0 forces alpha * beta = 0 and then f^2 = 0; use more blocks",
        ),
        e => e,
    })?;
    let scale = next.evaluate(&point)?.inv().expect("avoided zero");
    let alpha: Vec<F> = point[..r].iter().map(|a| a.mul(&scale)).collect();
    let beta: Vec<F> = point[r..].to_vec();
    let ab: Vec<F> = alpha.iter().chain(&beta).cloned().collect();
    let a = bihom.forms[d as usize - 1].evaluate(&ab)?;
    let (vb, wb) = bihom.vectors(&alpha, &beta);
    let mut v = vec![F::zero(); n];
    let mut w = vec![F::zero(); n];
    v[..r * m].clone_from_slice(&vb);
    w[..r * m].clone_from_slice(&wb);
    Ok(Specialization {
        degree: d,
        v,
        w,
        a,
        blocks: coords,
        bihom: Some(bihom),
        alpha,
        beta,
        method: "blocks",
    })
}

fn pencil_by_pairs<F: BaseScalar>(eq: &DiagonalEquation<F>, blocks: Option<usize>) -> Result<Specialization<F>> {
    let d = eq.degree();
    let n = eq.len();
    let r = block_count(blocks, n, 2, d as usize - 1)?;
    let ts: Vec<Q> = (1..=r as i64).map(|t| Q::from_integer(t.into())).collect();
    let rows: Vec<Vec<Q>> = (1..=d - 2)
        .map(|k| ts.iter().map(|t| num_traits::pow(t.clone(), k as usize)).collect())
        .collect();
    let kernel = nullspace(&rows, r);
    let moment = |b: &[Q], k: u32| -> Q {
        b.iter()
            .zip(&ts)
            .map(|(bi, t)| bi * num_traits::pow(t.clone(), k as usize))
            .sum()
    };
    let b = kernel
        .into_iter()
        .find(|b| !Scalar::is_zero(&moment(b, d - 1)))
        .ok_or_else(|| {
            Error::not_found("diagonal specialization", format!("{r} pair(s) cannot cancel {} moments", d - 2))
        })?;
    let lambda = (Q::from_integer(d.into()) * moment(&b, d - 1)).recip();
    let b: Vec<Q> = b.into_iter().map(|x| x * &lambda).collect();
    let a = F::from_rational(&moment(&b, d));
    let c = eq.coeffs();
    let mut v = vec![F::zero(); n];
    let mut w = vec![F::zero(); n];
    let mut us = Vec::new();
    let mut cs = Vec::new();
    let mut coords = Vec::new();
    let mut beta = Vec::new();
    for i in 0..r {
        let (j1, j2) = (2 * i, 2 * i + 1);
        let bi = F::from_rational(&b[i]);
        let root = |x: F| {
            x.odd_root(d)
                .ok_or_else(|| Error::not_found("diagonal specialization", "odd root outside the field"))
        };
        let p = root(bi.neg().div(&c[j1]).expect("nonzero"))?;
        let s = root(bi.div(&c[j2]).expect("nonzero"))?;
        let t = F::from_rational(&ts[i]);
        v[j1] = p.clone();
        v[j2] = s.clone();
        w[j2] = t.mul(&s);
        beta.push(t.mul(&s));
        us.push(vec![p, s]);
        cs.push(vec![c[j1].clone(), c[j2].clone()]);
        coords.push(vec![j1, j2]);
    }
    // the null vectors may have a zero entry when B_i = 0; keep the system only when it builds
    let bihom = build_bihomogeneous_system(&cs, &us, d).ok();
    Ok(Specialization {
        degree: d,
        v,
        w,
        a,
        blocks: coords,
        bihom,
        alpha: vec![F::one(); r],
        beta,
        method: "pairs",
    })
}

/// `(v, w, u, a, b)` with `f(xv + yw + zu) = x y^(d-1) + a y^d + b z^d`.
#[derive(Clone, Debug)]
pub struct PencilWithTerm<F> {
    pub v: Vec<F>,
    pub w: Vec<F>,
    pub u: Vec<F>,
    pub a: F,
    pub b: F,
}

impl<F: Scalar> PencilWithTerm<F> {
    pub fn verify(&self, eq: &DiagonalEquation<F>) -> bool {
        let d = eq.degree();
        let f = diagonal_form(eq.coeffs(), d);
        let Ok(g) = f.substitute_linear(&[self.v.clone(), self.w.clone(), self.u.clone()]) else {
            return false;
        };
        let mut expected = Polynomial::zero(3);
        expected.add_term(Monomial::new(vec![1, d - 1, 0]), F::one());
        expected.add_term(Monomial::new(vec![0, d, 0]), self.a.clone());
        expected.add_term(Monomial::new(vec![0, 0, d]), self.b.clone());
        g.sub(&expected).is_zero_exact() == Some(true) && !self.b.is_zero()
    }
}

/// Extends a specialization found on the first `n - 1` coordinates by
/// `u = e_n`, `b = c_n`.
pub fn add_diagonal_term<F: Scalar>(eq: &DiagonalEquation<F>, spec: &Specialization<F>) -> Result<PencilWithTerm<F>> {
    let n = eq.len();
    let pad = |x: &[F]| -> Result<Vec<F>> {
        match x.len() {
            l if l + 1 == n => Ok(x.iter().cloned().chain(std::iter::once(F::zero())).collect()),
            l if l == n && x[n - 1].is_zero() => Ok(x.to_vec()),
            _ => Err(Error::contract("specialization must avoid the last coordinate")),
        }
    };
    let mut u = vec![F::zero(); n];
    u[n - 1] = F::one();
    let out = PencilWithTerm {
        v: pad(&spec.v)?,
        w: pad(&spec.w)?,
        u,
        a: spec.a.clone(),
        b: eq.coeffs()[n - 1].clone(),
    };
    if !out.verify(eq) {
        return Err(Error::Verification("pencil identity with the extra term".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qf, RealAlg};

    fn real(v: &[i64]) -> Vec<RealAlg> {
        v.iter().map(|&x| RealAlg::rational(qf(x))).collect()
    }

    #[test]
    fn bihom_example() {
        let sys = build_bihomogeneous_system(&[real(&[1, 1])], &[real(&[1, -1])], 3).unwrap();
        // f^1 = 3 alpha^2 beta, f^2 = -3 alpha beta^2
        assert_eq!(sys.forms[0], Polynomial::from_terms(2, [(vec![2, 1], RealAlg::rational(qf(3)))]));
        assert_eq!(sys.forms[1], Polynomial::from_terms(2, [(vec![1, 2], RealAlg::rational(qf(-3)))]));
        assert!(sys.cross_check());
        let lin = build_bihomogeneous_system(&[real(&[2, 1])], &[real(&[1, -2])], 1).unwrap();
        assert_eq!(lin.forms.len(), 1);
        assert!(build_bihomogeneous_system(&[real(&[1, 1])], &[real(&[1, 1])], 3).is_err());
    }

    #[test]
    fn linear_pencil() {
        let eq = DiagonalEquation::new(real(&[1, 1]), 1).unwrap();
        let s = specialize_diagonal(&eq, None, &SolverBudget::default()).unwrap();
        assert_eq!(s.v, real(&[1, 0]));
        assert_eq!(s.w, real(&[0, 1]));
        assert!(s.verify(&eq));
    }

    #[test]
    fn cubic_pencil_over_reals() {
        let eq = DiagonalEquation::new(real(&[1, 1, 1, 1]), 3).unwrap();
        let s = specialize_diagonal(&eq, None, &SolverBudget::default()).unwrap();
        assert!(s.verify(&eq));
        assert_eq!(s.method, "blocks");
        assert!(s.bihom.as_ref().unwrap().cross_check());
    }

    #[test]
    fn one_block_fails() {
        let eq = DiagonalEquation::new(real(&[1, 1]), 3).unwrap();
        let err = specialize_diagonal(&eq, None, &SolverBudget::default()).unwrap_err();
        assert!(err.is_not_found());
    }

    #[test]
    fn quintic_pencil_by_pairs() {
        let eq = DiagonalEquation::new(real(&[1, 2, -3, 1, 5, 7, -1, 2]), 5).unwrap();
        let s = specialize_diagonal(&eq, None, &SolverBudget::default()).unwrap();
        assert_eq!(s.method, "pairs");
        assert!(s.verify(&eq));
    }

    #[test]
    fn extra_term() {
        let eq = DiagonalEquation::new(real(&[1, 1, 1, 1, 7]), 3).unwrap();
        let head = DiagonalEquation::new(real(&[1, 1, 1, 1]), 3).unwrap();
        let s = specialize_diagonal(&head, None, &SolverBudget::default()).unwrap();
        let t = add_diagonal_term(&eq, &s).unwrap();
        assert_eq!(t.b, RealAlg::rational(qf(7)));
        assert!(t.verify(&eq));
    }
}
