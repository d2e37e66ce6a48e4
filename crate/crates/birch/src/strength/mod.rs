//! Strength bookkeeping: the degree-tuple order, decomposition
//! certificates (upper bounds), certified lower bounds for quadratics and
//! diagonal forms, collective bounds and regularization.
//!
//! Strength is not computable in general, so every entry point reports
//! bounds together with where they came from.

mod bounds;
mod decompose;
mod regularize;

pub use bounds::{collective_strength_bounds, ClassBounds, StrengthBounds};
pub use decompose::{
    decomposition_search, find_linear_factor, verify_decomposition, DecompositionCertificate,
    DecompositionDefect,
};
pub use regularize::{regularize, Membership, RegularizationResult, Threshold};

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::DiagonalEquation;
use crate::linalg::rank;
use crate::poly::Polynomial;
use crate::scalar::{Scalar, Q};

/// A multiset of degrees, stored sorted descending and compared
/// lexicographically in that form. Replacing an entry by any finite list
/// of smaller entries makes the tuple strictly smaller, and the order is a
/// well-order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeTuple(Vec<u32>);

impl DegreeTuple {
    pub fn new(mut entries: Vec<u32>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        DegreeTuple(entries)
    }

    pub fn of<F: Scalar>(forms: &[Polynomial<F>]) -> Self {
        DegreeTuple::new(forms.iter().filter_map(|f| f.degree()).collect())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for DegreeTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for DegreeTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerBound::Finite(q) => write!(f, "{q}"),
            LowerBound::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn degree_tuple_less(a: &DegreeTuple, b: &DegreeTuple) -> bool {
    a < b
}

/// Symmetric Gram matrix of a quadratic form: `q(x) = x^T G x`.
pub fn gram_matrix<F: Scalar>(q: &Polynomial<F>) -> Result<Vec<Vec<F>>> {
    let n = q.nvars();
    let half = F::from_rational(&Q::new(1.into(), 2.into()));
    let mut g = vec![vec![F::zero(); n]; n];
    for (m, c) in q.terms() {
        if m.degree() != 2 {
            return Err(Error::contract("quadratic form expected"));
        }
        let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
        match vars.as_slice() {
            [i] => g[*i][*i] = c.clone(),
            [i, j] => {
                let h = c.mul(&half);
                g[*i][*j] = h.clone();
                g[*j][*i] = h;
            }
            _ => unreachable!("degree two monomial"),
        }
    }
    Ok(g)
}

/// Absolute strength of a quadratic form, `ceil(rank / 2)`. Over a field
/// that is not algebraically closed this is a lower bound for strength.
pub fn quadratic_strength<F: Scalar>(q: &Polynomial<F>) -> Result<usize> {
    let g = gram_matrix(q)?;
    Ok(rank(&g).div_ceil(2))
}

/// A strength lower bound: a rational or the infinite strength of nonzero
/// linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowerBound {
    Finite(Q),
    Infinite,
}

/// Certified lower bound for `sum c_i x_i^d`: the gradient `(d c_i x_i^(d-1))`
/// vanishes only at the origin, so the singular locus has codimension `n`,
/// and codimension is at most twice the strength.
pub fn diagonal_strength_lower<F: Scalar>(eq: &DiagonalEquation<F>) -> LowerBound {
    if eq.degree() == 1 {
        return LowerBound::Infinite;
    }
    let codim = singular_codimension_of_diagonal(eq);
    LowerBound::Finite(Q::new(codim.into(), 2.into()))
}

/// Codimension of the common zero set of the partial derivatives. Each
/// partial is `d c_i x_i^(d-1)` with `c_i != 0`, a power of a distinct
/// coordinate, so the zero set is the origin.
fn singular_codimension_of_diagonal<F: Scalar>(eq: &DiagonalEquation<F>) -> usize {
    let f = crate::poly::diagonal_form(eq.coeffs(), eq.degree());
    let grad = f.gradient();
    let mut killed = vec![false; eq.len()];
    for g in &grad {
        if let [(m, _)] = g.terms().collect::<Vec<_>>().as_slice() {
            let vars: Vec<usize> = (0..eq.len()).filter(|&i| m.exponent(i) > 0).collect();
            if let [i] = vars.as_slice() {
                killed[*i] = true;
            }
        }
    }
    killed.iter().filter(|&&k| k).count()
}

/// Detects `sum c_i x_i^d` with every `c_i` nonzero among the variables
/// that occur.
pub fn as_diagonal(f: &Polynomial<Q>) -> Option<DiagonalEquation<Q>> {
    let n = f.nvars();
    let d = f.degree()?;
    let mut coeffs = Vec::new();
    for (m, c) in f.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
        if vars.len() != 1 || m.degree() != d {
            return None;
        }
        coeffs.push(c.clone());
    }
    DiagonalEquation::new(coeffs, d).ok()
}

/// Deterministic sequence of nonzero integer vectors of length `k` with
/// entries in `[-2, 2]`, coprime, first nonzero entry positive, ordered by
/// largest entry, then number of nonzero entries, then lexicographically.
pub fn combination_sequence(k: usize, limit: usize) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = Vec::new();
    let cap = 5usize.saturating_pow(k as u32).min(1 << 16);
    let mut idx = vec![0usize; k];
    for _ in 0..cap {
        let v: Vec<i64> = idx.iter().map(|&i| i as i64 - 2).collect();
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if let Some(first) = v.iter().find(|&&x| x != 0) {
            if *first > 0 && g == 1 {
                all.push(v);
            }
        }
        let mut p = 0;
        while p < k {
            idx[p] += 1;
            if idx[p] < 5 {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == k {
            break;
        }
    }
    all.sort_by_key(|v| {
        (
            v.iter().map(|x| x.abs()).max().unwrap_or(0),
            v.iter().filter(|&&x| x != 0).count(),
            v.iter().map(|x| -x).collect::<Vec<_>>(),
        )
    });
    all.truncate(limit);
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VarNames};
    use crate::scalar::{q, qf};

    fn t(v: &[u32]) -> DegreeTuple {
        DegreeTuple::new(v.to_vec())
    }

    #[test]
    fn tuple_examples() {
        assert!(degree_tuple_less(&t(&[3, 3, 1]), &t(&[5, 3])));
        assert!(!degree_tuple_less(&t(&[3]), &t(&[3])));
        assert!(degree_tuple_less(&t(&[3, 1, 1]), &t(&[3, 3])));
        assert_eq!(t(&[1, 3, 3]).entries(), &[3, 3, 1]);
    }

    fn poly(s: &str) -> Polynomial<Q> {
        let names = VarNames::new(["x", "y", "z", "w"].map(String::from).to_vec());
        parse_polynomial(s, Some(&names)).unwrap().0
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(quadratic_strength(&poly("x^2 + y^2")).unwrap(), 1);
        assert_eq!(quadratic_strength(&poly("x*y")).unwrap(), 1);
        assert_eq!(quadratic_strength(&poly("x*y + z*w")).unwrap(), 2);
        assert_eq!(quadratic_strength(&Polynomial::<Q>::zero(3)).unwrap(), 0);
        assert!(quadratic_strength(&poly("x^3")).is_err());
    }

    #[test]
    fn diagonal_lower_examples() {
        let eq = DiagonalEquation::new(vec![qf(1); 3], 3).unwrap();
        assert_eq!(diagonal_strength_lower(&eq), LowerBound::Finite(q(3, 2)));
        let eq = DiagonalEquation::new(vec![qf(2)], 3).unwrap();
        assert_eq!(diagonal_strength_lower(&eq), LowerBound::Finite(q(1, 2)));
        let eq = DiagonalEquation::new(vec![qf(1), qf(1)], 1).unwrap();
        assert_eq!(diagonal_strength_lower(&eq), LowerBound::Infinite);
    }

    #[test]
    fn combinations_start_with_units() {
        let c = combination_sequence(3, 10);
        assert_eq!(c[0], vec![1, 0, 0]);
        assert_eq!(c[1], vec![0, 1, 0]);
        assert_eq!(c[2], vec![0, 0, 1]);
        assert_eq!(c[3].iter().filter(|&&x| x != 0).count(), 2);
    }
}
