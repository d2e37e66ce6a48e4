//! Collective strength: the least strength of a nontrivial linear
//! combination, taken per degree and then minimized over degrees.

use std::collections::BTreeMap;

use super::decompose::subsets;
use super::{
    as_diagonal, combination_sequence, decomposition_search, diagonal_strength_lower,
    quadratic_strength, DecompositionCertificate, LowerBound,
};
use crate::error::{Error, Result};
use crate::fields::SolverBudget;
use crate::linalg::rank;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{Scalar, Q};

/// Bounds for one degree class.
#[derive(Clone, Debug)]
pub struct ClassBounds {
    pub degree: u32,
    pub count: usize,
    pub lower: Option<LowerBound>,
    /// `None` stands for infinity.
    pub upper: Option<usize>,
    pub lower_provenance: String,
    pub upper_provenance: String,
    /// Combination coefficients and certificate behind `upper`.
    pub witness: Option<(Vec<i64>, DecompositionCertificate<Q>)>,
}

/// Bounds on collective strength with their provenance.
#[derive(Clone, Debug)]
pub struct StrengthBounds {
    pub lower: Option<LowerBound>,
    pub upper: Option<usize>,
    pub lower_provenance: String,
    pub upper_provenance: String,
    pub classes: Vec<ClassBounds>,
}

fn lower_le(a: &LowerBound, b: &LowerBound) -> bool {
    match (a, b) {
        (_, LowerBound::Infinite) => true,
        (LowerBound::Infinite, LowerBound::Finite(_)) => false,
        (LowerBound::Finite(x), LowerBound::Finite(y)) => x <= y,
    }
}

impl StrengthBounds {
    /// `lower <= upper` whenever both are present.
    pub fn is_consistent(&self) -> bool {
        let ok = |l: &Option<LowerBound>, u: &Option<usize>| match (l, u) {
            (Some(l), Some(u)) => lower_le(l, &LowerBound::Finite(Q::from_integer((*u).into()))),
            _ => true,
        };
        ok(&self.lower, &self.upper) && self.classes.iter().all(|c| ok(&c.lower, &c.upper))
    }
}

fn coefficient_matrix(forms: &[&Polynomial<Q>]) -> Vec<Vec<Q>> {
    let mut monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for f in forms {
        for (m, _) in f.terms() {
            let next = monos.len();
            monos.entry(m.clone()).or_insert(next);
        }
    }
    let mut rows = vec![vec![Q::from_i64(0); forms.len()]; monos.len()];
    for (j, f) in forms.iter().enumerate() {
        for (m, c) in f.terms() {
            rows[monos[m]][j] = c.clone();
        }
    }
    rows
}

/// Least support size of a nonzero vector in the row space of the
/// diagonal coefficient matrix: `n` minus the largest column set on which
/// the rows are dependent.
fn min_diagonal_support(forms: &[&Polynomial<Q>], n: usize) -> Option<usize> {
    if n > 16 {
        return None;
    }
    let k = forms.len();
    let cols: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            forms
                .iter()
                .map(|f| {
                    f.terms()
                        .find(|(m, _)| m.exponent(i) > 0)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(|| Q::from_i64(0))
                })
                .collect()
        })
        .collect();
    for drop in (0..n).rev() {
        for set in subsets(n, drop) {
            let m: Vec<Vec<Q>> = set.iter().map(|&i| cols[i].clone()).collect();
            if rank(&m) < k {
                return Some(n - drop);
            }
        }
    }
    Some(n)
}

fn class_bounds(degree: u32, forms: &[&Polynomial<Q>], budget: &SolverBudget) -> Result<ClassBounds> {
    let count = forms.len();
    let mut out = ClassBounds {
        degree,
        count,
        lower: None,
        upper: None,
        lower_provenance: "none".into(),
        upper_provenance: "none".into(),
        witness: None,
    };
    if rank(&coefficient_matrix(forms)) < count {
        out.lower = Some(LowerBound::Finite(Q::from_i64(0)));
        out.upper = Some(0);
        out.lower_provenance = "linear dependence".into();
        out.upper_provenance = "linear dependence: a nontrivial combination vanishes".into();
        return Ok(out);
    }
    if degree == 1 {
        out.lower = Some(LowerBound::Infinite);
        out.lower_provenance = "independent linear forms have infinite strength".into();
        out.upper_provenance = "independent linear forms have infinite strength".into();
        return Ok(out);
    }
    // upper bounds from sampled combinations
    for combo in combination_sequence(count, budget.restarts as usize) {
        let mut h = Polynomial::zero(forms[0].nvars());
        for (c, f) in combo.iter().zip(forms) {
            if *c != 0 {
                h = h.add(&f.scale(&Q::from_i64(*c)));
            }
        }
        let trivial = h.len();
        let cap = out.upper.unwrap_or(usize::MAX).min(trivial + 1);
        if cap == 0 {
            break;
        }
        match decomposition_search(&h, cap - 1, budget)? {
            Some(cert) => {
                out.upper = Some(cert.len());
                out.upper_provenance = format!("decomposition certificate for combination {combo:?}");
                out.witness = Some((combo, cert));
            }
            None if out.upper.is_none_or(|u| trivial < u) => {
                out.upper = Some(trivial);
                out.upper_provenance = format!("monomial count of combination {combo:?}");
            }
            None => {}
        }
    }
    // lower bounds where a certificate applies
    let nvars = forms[0].nvars();
    let diagonal: Option<Vec<_>> = forms.iter().map(|f| as_diagonal(f)).collect();
    if let Some(eqs) = diagonal {
        if count == 1 {
            out.lower = Some(diagonal_strength_lower(&eqs[0]));
            out.lower_provenance = "singular locus of a diagonal form has full codimension".into();
        } else if let Some(s) = min_diagonal_support(forms, nvars) {
            out.lower = Some(LowerBound::Finite(Q::new(s.into(), 2.into())));
            out.lower_provenance =
                format!("every nontrivial combination is diagonal with at least {s} terms");
        }
    } else if degree == 2 {
        if count == 1 {
            let s = quadratic_strength(forms[0])?;
            out.lower = Some(LowerBound::Finite(Q::from_integer(s.into())));
            out.lower_provenance = "Gram rank (absolute strength)".into();
        } else {
            out.lower = Some(LowerBound::Finite(Q::from_i64(1)));
            out.lower_provenance = "independent nonzero quadratics".into();
        }
    }
    Ok(out)
}

/// Bounds on the collective strength of homogeneous forms.
pub fn collective_strength_bounds(forms: &[Polynomial<Q>], budget: &SolverBudget) -> Result<StrengthBounds> {
    if forms.is_empty() {
        return Err(Error::contract("collective strength of an empty family"));
    }
    let n = forms[0].nvars();
    let mut by_degree: BTreeMap<u32, Vec<&Polynomial<Q>>> = BTreeMap::new();
    for f in forms {
        if f.nvars() != n {
            return Err(Error::contract("forms must share one variable set"));
        }
        if !f.is_homogeneous() {
            return Err(Error::contract("forms must be homogeneous"));
        }
        match f.degree() {
            Some(d) => by_degree.entry(d).or_default().push(f),
            // a zero form is a vanishing combination in every degree
            None => by_degree.entry(0).or_default().push(f),
        }
    }
    let mut classes = Vec::new();
    for (d, fs) in &by_degree {
        if *d == 0 {
            classes.push(ClassBounds {
                degree: 0,
                count: fs.len(),
                lower: Some(LowerBound::Finite(Q::from_i64(0))),
                upper: Some(0),
                lower_provenance: "zero form".into(),
                upper_provenance: "zero form".into(),
                witness: None,
            });
            continue;
        }
        classes.push(class_bounds(*d, fs, budget)?);
    }
    let mut upper: Option<(usize, String)> = None;
    for c in &classes {
        if let Some(u) = c.upper {
            if upper.as_ref().is_none_or(|(v, _)| u < *v) {
                upper = Some((u, format!("degree {}: {}", c.degree, c.upper_provenance)));
            }
        }
    }
    let mut lower: Option<(LowerBound, String)> = Some((LowerBound::Infinite, "no classes".into()));
    for c in &classes {
        lower = match (lower, &c.lower) {
            (Some((cur, p)), Some(l)) => {
                if lower_le(&cur, l) {
                    Some((cur, p))
                } else {
                    Some((l.clone(), format!("degree {}: {}", c.degree, c.lower_provenance)))
                }
            }
            _ => None,
        };
    }
    let (upper, upper_provenance) = match upper {
        Some((u, p)) => (Some(u), p),
        None => (None, "no finite upper bound found".into()),
    };
    let (lower, lower_provenance) = match lower {
        Some((l, p)) => (Some(l), p),
        None => (None, "no certificate applies to some degree class".into()),
    };
    Ok(StrengthBounds {
        lower,
        upper,
        lower_provenance,
        upper_provenance,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VarNames};
    use crate::scalar::q;

    fn poly(s: &str) -> Polynomial<Q> {
        let names = VarNames::new(["x", "y", "z", "w", "u"].map(String::from).to_vec());
        parse_polynomial(s, Some(&names)).unwrap().0
    }

    #[test]
    fn duplicates_have_strength_zero() {
        let f = poly("x^3 + y*z*w");
        let b = collective_strength_bounds(&[f.clone(), f], &SolverBudget::default()).unwrap();
        assert_eq!(b.upper, Some(0));
    }

    #[test]
    fn diagonal_lower_bound() {
        let f = poly("x^3 + 2*y^3 - z^3 + 5*w^3 + u^3");
        let b = collective_strength_bounds(&[f], &SolverBudget::default()).unwrap();
        assert_eq!(b.lower, Some(LowerBound::Finite(q(5, 2))));
        assert!(b.is_consistent());
    }

    #[test]
    fn quadratic_bracket() {
        let b = collective_strength_bounds(&[poly("x^2 + y^2"), poly("z^2 + w^2")], &SolverBudget::default())
            .unwrap();
        assert_eq!(b.lower, Some(LowerBound::Finite(q(1, 1))));
        assert_eq!(b.upper, Some(2));
    }

    #[test]
    fn two_diagonals_share_support() {
        // x^3 + y^3 + z^3 and x^3 - y^3: the difference has two terms
        let b = collective_strength_bounds(&[poly("x^3 + y^3 + z^3"), poly("x^3 - y^3")], &SolverBudget::default())
            .unwrap();
        assert_eq!(b.lower, Some(LowerBound::Finite(q(1, 1))));
    }
}
