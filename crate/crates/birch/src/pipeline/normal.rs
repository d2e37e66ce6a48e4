//! The normal form `x_i y_i^(d_i-1) + a_i y_i^(d_i) + b_i z_i^(d_i) + h_i(w)`
//! and the rational parametrization of its zero set.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{BaseScalar, DiagonalEquation, SolverBudget};
use crate::linalg::rank;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{RealScalar, Scalar};

use super::leaf::{combine, independent, int};
use super::orthogonal::{birch_orthogonal_blocks, component_capacity};
use super::pencil::{add_diagonal_term, specialize_diagonal};
use super::{select_vanishing_vector, PipelineConfig};

/// Data for one form: `f_i(x v + y w + z u + W w') = x y^(d-1) + a y^d + b z^d + h(w')`.
#[derive(Clone, Debug)]
pub struct IndexData<F> {
    pub degree: u32,
    pub v: Vec<F>,
    pub w: Vec<F>,
    pub u: Vec<F>,
    pub a: F,
    pub b: F,
    /// `f_i` restricted to the residual subspace.
    pub h: Polynomial<F>,
    pub method: &'static str,
}

/// Blocks `V_i = span(v_i, w_i, u_i)` and a residual subspace `W` on which
/// every form has the shape above, and each form vanishes on the blocks of
/// the others.
#[derive(Clone, Debug)]
pub struct NormalFormData<F> {
    pub forms: Vec<Polynomial<F>>,
    pub indices: Vec<IndexData<F>>,
    /// Basis of `W`.
    pub residual: Vec<Vec<F>>,
    pub avoid: Option<Polynomial<F>>,
    pub provenance: Vec<String>,
}

/// Free parameters of the parametrization: `y_i != 0`, `z_i`, and `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parameters<F> {
    pub y: Vec<F>,
    pub z: Vec<F>,
    pub w: Vec<F>,
}

impl<F: Scalar> NormalFormData<F> {
    pub fn ambient_dim(&self) -> usize {
        self.forms[0].nvars()
    }

    pub fn r(&self) -> usize {
        self.indices.len()
    }

    pub fn residual_dim(&self) -> usize {
        self.residual.len()
    }

    /// `2r + dim W`.
    pub fn parameter_count(&self) -> usize {
        2 * self.r() + self.residual_dim()
    }

    /// `v_1, w_1, u_1, ..., v_r, w_r, u_r`, then the basis of `W`.
    pub fn basis(&self) -> Vec<Vec<F>> {
        let mut out = Vec::new();
        for d in &self.indices {
            out.push(d.v.clone());
            out.push(d.w.clone());
            out.push(d.u.clone());
        }
        out.extend(self.residual.iter().cloned());
        out
    }

    /// The expected restriction of form `i` in the variables of [`Self::basis`].
    pub fn expected(&self, i: usize) -> Polynomial<F> {
        let r = self.r();
        let total = 3 * r + self.residual_dim();
        let d = &self.indices[i];
        let e = d.degree;
        let mut p = Polynomial::zero(total);
        let mono = |pairs: &[(usize, u32)]| {
            let mut ex = vec![0; total];
            for &(v, k) in pairs {
                ex[v] += k;
            }
            Monomial::new(ex)
        };
        p.add_term(mono(&[(3 * i, 1), (3 * i + 1, e - 1)]), F::one());
        p.add_term(mono(&[(3 * i + 1, e)]), d.a.clone());
        p.add_term(mono(&[(3 * i + 2, e)]), d.b.clone());
        let map: Vec<usize> = (0..self.residual_dim()).map(|k| 3 * r + k).collect();
        p.add(&d.h.remap(&map, total))
    }

    /// Every restriction matches coefficient for coefficient, every `b_i`
    /// is nonzero, and all basis vectors are independent.
    pub fn verify(&self) -> bool {
        let basis = self.basis();
        if !independent(&basis) || self.indices.iter().any(|d| d.b.is_zero()) {
            return false;
        }
        self.forms.iter().enumerate().all(|(i, f)| {
            f.substitute_linear(&basis)
                .is_ok_and(|g| g.sub(&self.expected(i)).is_zero_exact() == Some(true))
        })
    }

    /// `x_i = -(a_i y_i^d + b_i z_i^d + h_i(w)) / y_i^(d-1)`, mapped to the
    /// ambient space. `None` when some `y_i` is zero.
    pub fn point(&self, p: &Parameters<F>) -> Option<Vec<F>> {
        let n = self.ambient_dim();
        let mut coeffs = Vec::with_capacity(3 * self.r() + self.residual_dim());
        for (i, d) in self.indices.iter().enumerate() {
            let (y, z) = (&p.y[i], &p.z[i]);
            let hw = d.h.evaluate(&p.w).ok()?;
            let num = d.a.mul(&y.pow(d.degree)).add(&d.b.mul(&z.pow(d.degree))).add(&hw);
            let x = num.neg().div(&y.pow(d.degree - 1))?;
            coeffs.extend([x, y.clone(), z.clone()]);
        }
        coeffs.extend(p.w.iter().cloned());
        Some(combine(&self.basis(), &coeffs, n))
    }

    /// Exact partial derivatives of [`Self::point`], one column per
    /// parameter in the order `y, z, w`.
    pub fn jacobian(&self, p: &Parameters<F>) -> Option<Vec<Vec<F>>> {
        let n = self.ambient_dim();
        let r = self.r();
        let k = self.residual_dim();
        let mut cols = Vec::with_capacity(2 * r + k);
        let mut dx_dw: Vec<Vec<F>> = Vec::with_capacity(r);
        let mut dx_dy = Vec::with_capacity(r);
        let mut dx_dz = Vec::with_capacity(r);
        for (i, d) in self.indices.iter().enumerate() {
            let e = d.degree;
            let (y, z) = (&p.y[i], &p.z[i]);
            let inv_y = y.inv()?;
            let rest = d.b.mul(&z.pow(e)).add(&d.h.evaluate(&p.w).ok()?);
            // x = -a y - rest y^(1-e)
            let ye = inv_y.pow(e);
            let y1e = inv_y.pow(e - 1);
            dx_dy.push(d.a.neg().add(&int::<F>(e as i64 - 1).mul(&rest).mul(&ye)));
            dx_dz.push(int::<F>(-(e as i64)).mul(&d.b).mul(&z.pow(e - 1)).mul(&y1e));
            dx_dw.push(
                (0..k)
                    .map(|j| {
                        let dh = d.h.derivative(j).evaluate(&p.w).unwrap_or_else(|_| F::zero());
                        dh.neg().mul(&y1e)
                    })
                    .collect(),
            );
        }
        let axpy = |base: &[F], s: &F, v: &[F]| -> Vec<F> { base.iter().zip(v).map(|(b, x)| b.add(&s.mul(x))).collect() };
        for (i, d) in self.indices.iter().enumerate() {
            cols.push(axpy(&d.w, &dx_dy[i], &d.v));
        }
        for (i, d) in self.indices.iter().enumerate() {
            cols.push(axpy(&d.u, &dx_dz[i], &d.v));
        }
        for j in 0..k {
            let mut c = self.residual[j].clone();
            for (i, d) in self.indices.iter().enumerate() {
                c = axpy(&c, &dx_dw[i][j], &d.v);
            }
            cols.push(c);
        }
        debug_assert!(cols.iter().all(|c| c.len() == n));
        Some(cols)
    }

    /// Exact rank of [`Self::jacobian`].
    pub fn jacobian_rank(&self, p: &Parameters<F>) -> Option<usize> {
        Some(rank(&self.jacobian(p)?))
    }

    pub fn canonical_parameters(&self) -> Parameters<F> {
        Parameters {
            y: vec![F::one(); self.r()],
            z: vec![F::zero(); self.r()],
            w: vec![F::zero(); self.residual_dim()],
        }
    }

    /// Whether every form vanishes at `x`, exactly.
    pub fn on_variety(&self, x: &[F]) -> bool {
        self.forms
            .iter()
            .all(|f| f.evaluate(x).is_ok_and(|v| v.is_zero_exact() == Some(true)))
    }

    fn admissible(&self, x: &[F]) -> bool {
        match &self.avoid {
            Some(g) => g.evaluate(x).is_ok_and(|v| v.is_zero_exact() == Some(false)),
            None => true,
        }
    }

    /// `count` points of the zero set with pairwise distinct parameters
    /// (hence distinct points, the basis being independent). The first is
    /// the canonical point when admissible; the rest use seeded small
    /// integers with `y_i` in `{1, -1, 2, -2}`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<(Parameters<F>, Vec<F>)>> {
        let mut rng = crate::fields::SolverBudget::with_seed(seed).rng(0x5a3b);
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut out = Vec::with_capacity(count);
        let r = self.r();
        let k = self.residual_dim();
        let mut candidate = vec![1i64; r].into_iter().chain(vec![0; r + k]).collect::<Vec<_>>();
        let limit = 64 * count.max(1) + 64;
        for _ in 0..limit {
            if out.len() == count {
                break;
            }
            if seen.insert(candidate.clone()) {
                let params = Parameters {
                    y: candidate[..r].iter().map(|&c| int(c)).collect(),
                    z: candidate[r..2 * r].iter().map(|&c| int(c)).collect(),
                    w: candidate[2 * r..].iter().map(|&c| int(c)).collect(),
                };
                if let Some(x) = self.point(&params) {
                    if self.admissible(&x) {
                        if !self.on_variety(&x) {
                            return Err(Error::Verification("parametrized point misses the variety".into()));
                        }
                        out.push((params, x));
                    }
                }
            }
            let ys = [1i64, -1, 2, -2];
            candidate = (0..r).map(|_| ys[rng.gen_range(0..4)]).collect();
            candidate.extend((0..r + k).map(|_| rng.gen_range(-2..=2)));
        }
        if out.len() < count {
            return Err(Error::not_found("sampling", format!("{} of {count} admissible points", out.len())));
        }
        Ok(out)
    }
}

impl<F: RealScalar> NormalFormData<F> {
    /// [`Self::point`] in floating point.
    pub fn point_f64(&self, y: &[f64], z: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.ambient_dim();
        let mut out = vec![0.0; n];
        let mut add = |s: f64, v: &[F]| {
            for (o, x) in out.iter_mut().zip(v) {
                *o += s * x.approx();
            }
        };
        for (i, d) in self.indices.iter().enumerate() {
            let e = d.degree as i32;
            let hw = eval_f64(&d.h, w);
            let x = -(d.a.approx() * y[i].powi(e) + d.b.approx() * z[i].powi(e) + hw) / y[i].powi(e - 1);
            add(x, &d.v);
            add(y[i], &d.w);
            add(z[i], &d.u);
        }
        for (j, b) in self.residual.iter().enumerate() {
            add(w[j], b);
        }
        out
    }

    /// Central differences of [`Self::point_f64`] against the exact
    /// Jacobian, entrywise within `rel_tol` relative to the column scale.
    pub fn jacobian_matches_differences(&self, p: &Parameters<F>, rel_tol: f64) -> bool {
        let Some(exact) = self.jacobian(p) else {
            return false;
        };
        let flat: Vec<f64> = p.y.iter().chain(&p.z).chain(&p.w).map(|x| x.approx()).collect();
        let r = self.r();
        let split = |v: &[f64]| (v[..r].to_vec(), v[r..2 * r].to_vec(), v[2 * r..].to_vec());
        exact.iter().enumerate().all(|(k, col)| {
            let h = 1e-5 * flat[k].abs().max(1.0);
            let mut plus = flat.clone();
            let mut minus = flat.clone();
            plus[k] += h;
            minus[k] -= h;
            let (a, b, c) = split(&plus);
            let fp = self.point_f64(&a, &b, &c);
            let (a, b, c) = split(&minus);
            let fm = self.point_f64(&a, &b, &c);
            let scale = col.iter().map(|x| x.approx().abs()).fold(1.0, f64::max);
            col.iter()
                .zip(fp.iter().zip(&fm))
                .all(|(x, (p, m))| ((p - m) / (2.0 * h) - x.approx()).abs() <= rel_tol * scale)
        })
    }
}

fn eval_f64<F: RealScalar>(p: &Polynomial<F>, x: &[f64]) -> f64 {
    p.terms()
        .map(|(m, c)| {
            let mut t = c.approx();
            for (i, &e) in m.exponents().iter().enumerate() {
                t *= x[i].powi(e as i32);
            }
            t
        })
        .sum()
}

/// Coordinates needed by one index: the pencil plus one for `z`.
fn index_size<F: BaseScalar>(d: u32, config: &PipelineConfig) -> usize {
    let pencil = match d {
        1 => 2,
        3 => config.blocks.unwrap_or(2) * F::field().nk_table(3).unwrap_or(3),
        _ => 2 * config.blocks.unwrap_or(d as usize - 1),
    };
    pencil + 1
}

/// The normal form of odd degree forms.
///
/// Orthogonal blocks come first, one per needed vector plus a residual
/// subspace. In each block a vector is selected on which the form of its
/// index is nonzero and every other form vanishes; these vectors span a
/// subspace where form `i` is diagonal and the others vanish. The diagonal
/// form is then specialized on all but its last coordinate, and the last
/// one supplies the `b z^d` term.
pub fn normal_form<F: BaseScalar>(
    forms: &[Polynomial<F>],
    avoid: Option<&Polynomial<F>>,
    config: &PipelineConfig,
    budget: &SolverBudget,
) -> Result<NormalFormData<F>> {
    if forms.is_empty() {
        return Err(Error::contract("normal form of an empty system"));
    }
    let degrees: Vec<u32> = forms
        .iter()
        .map(|f| match f.degree() {
            Some(d) if d % 2 == 1 && f.is_homogeneous() => Ok(d),
            _ => Err(Error::contract("normal form needs nonzero homogeneous forms of odd degree")),
        })
        .collect::<Result<_>>()?;
    let r = forms.len();
    let sizes: Vec<usize> = degrees.iter().map(|&d| index_size::<F>(d, config)).collect();
    let total: usize = sizes.iter().sum();
    let ell = config.ell.min(r).max(1);
    // spare blocks give the assignment room; unused ones join the residual
    let count = component_capacity(forms, ell, avoid).max(total);
    let bb = birch_orthogonal_blocks(forms, count, ell, avoid, budget)?;
    let blocks = bb.blocks();
    let mut provenance = bb.family.provenance.clone();
    provenance.push(format!("{count} orthogonal blocks of dimension {ell} plus a residual block"));
    let n = forms[0].nvars();
    let mut indices = Vec::with_capacity(r);
    let mut used = vec![false; count];
    for (i, &size) in sizes.iter().enumerate() {
        let mut vectors = Vec::with_capacity(size);
        let mut coeffs = Vec::with_capacity(size);
        // first unused blocks on which form i survives and the others can vanish
        for (j, block) in blocks[..count].iter().enumerate() {
            if vectors.len() == size {
                break;
            }
            if used[j] {
                continue;
            }
            let restricted: Vec<Polynomial<F>> =
                forms.iter().map(|f| f.substitute_linear(block)).collect::<Result<_>>()?;
            if restricted[i].is_zero() {
                continue;
            }
            let y = match select_vanishing_vector(&restricted, i, budget) {
                Ok(y) => y,
                Err(e) if e.is_not_found() => continue,
                Err(e) => return Err(e),
            };
            used[j] = true;
            let v = combine(block, &y, n);
            coeffs.push(forms[i].evaluate(&v)?);
            vectors.push(v);
        }
        if vectors.len() < size {
            return Err(Error::not_found(
                "normal form",
                format!("form {i} needs {size} blocks where it alone survives, found {}", vectors.len()),
            ));
        }
        let d = degrees[i];
        let head = DiagonalEquation::new(coeffs[..size - 1].to_vec(), d)?;
        let full = DiagonalEquation::new(coeffs, d)?;
        let spec = specialize_diagonal(&head, config.blocks, budget)?;
        let pencil = add_diagonal_term(&full, &spec)?;
        provenance.push(format!("form {}: degree {d}, pencil by {}", i + 1, spec.method));
        indices.push(IndexData {
            degree: d,
            v: combine(&vectors, &pencil.v, n),
            w: combine(&vectors, &pencil.w, n),
            u: combine(&vectors, &pencil.u, n),
            a: pencil.a,
            b: pencil.b,
            h: Polynomial::zero(0),
            method: spec.method,
        });
    }
    let mut residual: Vec<Vec<F>> =
        (0..count).filter(|&j| !used[j]).flat_map(|j| blocks[j].iter().cloned()).collect();
    residual.extend(blocks[count].iter().cloned());
    for (d, f) in indices.iter_mut().zip(forms) {
        d.h = f.substitute_linear(&residual)?;
    }
    let out = NormalFormData {
        forms: forms.to_vec(),
        indices,
        residual,
        avoid: avoid.cloned(),
        provenance,
    };
    if !out.verify() {
        return Err(Error::Verification("normal form restriction".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{lift, parse_polynomial, VarNames};
    use crate::scalar::RealAlg;

    fn poly(s: &str, n: usize) -> Polynomial<RealAlg> {
        let names = VarNames::new((1..=n).map(|i| format!("x{i}")).collect());
        lift(&parse_polynomial(s, Some(&names)).unwrap().0)
    }

    #[test]
    fn diagonal_cubic_normal_form() {
        let f = poly("x1^3 + 2*x2^3 - x3^3 + x4^3 + 3*x5^3 + x6^3", 6);
        let nf = normal_form(&[f], None, &PipelineConfig::default(), &SolverBudget::default()).unwrap();
        assert!(nf.verify());
        assert_eq!(nf.residual_dim(), 1);
        let x = nf.point(&nf.canonical_parameters()).unwrap();
        assert!(nf.on_variety(&x));
    }

    #[test]
    fn perturbed_cubic_normal_form_and_samples() {
        let f = poly("x1^3 + x2^3 - 2*x3^3 + x4^3 + x5^3 + 5*x6^3 - x7^3 + x7*x8^2 + x8^3", 8);
        let nf = normal_form(&[f], None, &PipelineConfig::default(), &SolverBudget::default()).unwrap();
        assert_eq!(nf.parameter_count(), 2 + nf.residual_dim());
        let pts = nf.sample(5, 7).unwrap();
        assert_eq!(pts.len(), 5);
        let p = &pts[1].0;
        assert_eq!(nf.jacobian_rank(p), Some(nf.parameter_count()));
        assert!(nf.jacobian_matches_differences(p, 1e-6));
    }

    #[test]
    fn two_forms_in_disjoint_variables() {
        let n = 12;
        let f1 = poly("x1^3 + x2^3 + 2*x3^3 + x4^3 + x5^3 + x6^3", n);
        let f2 = poly("x7^3 - x8^3 + x9^3 + 3*x10^3 + x11^3 + x12^3", n);
        let config = PipelineConfig {
            ell: 1,
            ..Default::default()
        };
        let nf = normal_form(&[f1, f2], None, &config, &SolverBudget::default()).unwrap();
        assert!(nf.verify());
        assert_eq!(nf.residual_dim(), 2);
        let first: Vec<usize> = (0..n).filter(|&c| !nf.indices[0].v[c].is_zero()).collect();
        assert!(first.iter().all(|&c| c < 6));
        let (p, x) = &nf.sample(3, 1).unwrap()[2];
        assert!(nf.on_variety(x));
        assert_eq!(nf.jacobian_rank(p), Some(6));
    }
}
