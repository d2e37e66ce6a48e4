//! Simple algebraic extensions `Q(a) = Q[a]/(m)` and restriction of scalars
//! from them down to `Q`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, UPoly};
use crate::scalar::{Interval, Scalar, Q};

/// `Q[a]/(m)` for a monic polynomial `m`. Irreducibility is the caller's
/// promise; if it fails, inversion of a zero divisor returns `None`.
#[derive(Debug, PartialEq)]
pub struct ExtField {
    minpoly: UPoly<Q>,
}

impl ExtField {
    pub fn new(minpoly: UPoly<Q>) -> Result<Arc<Self>> {
        let Some(d) = minpoly.degree() else {
            return Err(Error::contract("minimal polynomial is zero"));
        };
        if d == 0 {
            return Err(Error::contract("minimal polynomial must have positive degree"));
        }
        if minpoly.squarefree_part().degree() != Some(d) {
            return Err(Error::contract("minimal polynomial must be squarefree"));
        }
        let minpoly = minpoly.monic().expect("nonzero leading coefficient");
        Ok(Arc::new(ExtField { minpoly }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().expect("positive degree")
    }

    pub fn minpoly(&self) -> &UPoly<Q> {
        &self.minpoly
    }

    /// The generator `a`.
    pub fn generator(self: &Arc<Self>) -> ExtElem {
        ExtElem::new(self, UPoly::x())
    }

    /// `c_0 + c_1 a + ... + c_{e-1} a^{e-1}`.
    pub fn element(self: &Arc<Self>, coords: &[Q]) -> ExtElem {
        ExtElem::new(self, UPoly::new(coords.to_vec()))
    }
}

/// An element of an [`ExtField`]. Rational constants carry no field and
/// adopt the field of whatever they meet.
#[derive(Clone, Debug)]
pub struct ExtElem {
    field: Option<Arc<ExtField>>,
    rep: UPoly<Q>,
}

impl ExtElem {
    pub fn new(field: &Arc<ExtField>, rep: UPoly<Q>) -> Self {
        let rep = rep.rem(&field.minpoly).expect("monic modulus");
        ExtElem {
            field: Some(field.clone()),
            rep,
        }
    }

    fn constant(c: Q) -> Self {
        ExtElem {
            field: None,
            rep: UPoly::constant(c),
        }
    }

    pub fn field(&self) -> Option<&Arc<ExtField>> {
        self.field.as_ref()
    }

    /// Coordinates in the power basis `1, a, ..., a^{e-1}` of `field`.
    pub fn coords(&self, e: usize) -> Vec<Q> {
        (0..e).map(|k| self.rep.coeff(k)).collect()
    }

    fn join(&self, other: &Self) -> Option<Arc<ExtField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                assert!(Arc::ptr_eq(a, b) || a == b, "elements of different extensions");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn make(field: Option<Arc<ExtField>>, rep: UPoly<Q>) -> Self {
        match field {
            Some(f) => ExtElem::new(&f, rep),
            None => ExtElem { field: None, rep },
        }
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.rep.coeffs().iter().enumerate() {
            if Scalar::is_zero(c) {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})*a"),
                _ => format!("({c})*a^{k}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Scalar for ExtElem {
    fn zero() -> Self {
        ExtElem::constant(<Q as Scalar>::zero())
    }
    fn one() -> Self {
        ExtElem::constant(<Q as Scalar>::one())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        ExtElem::make(self.join(rhs), self.rep.add(&rhs.rep))
    }
    fn sub(&self, rhs: &Self) -> Self {
        ExtElem::make(self.join(rhs), self.rep.sub(&rhs.rep))
    }
    fn mul(&self, rhs: &Self) -> Self {
        ExtElem::make(self.join(rhs), self.rep.mul(&rhs.rep))
    }
    fn neg(&self) -> Self {
        ExtElem {
            field: self.field.clone(),
            rep: self.rep.neg(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        match &self.field {
            None => Some(ExtElem::constant(self.rep.coeff(0).recip())),
            Some(f) => {
                let (g, s, _) = self.rep.ext_gcd(&f.minpoly)?;
                (g.degree() == Some(0)).then(|| ExtElem::new(f, s))
            }
        }
    }
    fn from_rational(value: &Q) -> Self {
        ExtElem::constant(value.clone())
    }
    fn as_rational(&self) -> Option<Q> {
        (self.rep.degree().unwrap_or(0) == 0).then(|| self.rep.coeff(0))
    }
    fn enclosure(&self) -> Option<Interval> {
        self.as_rational().map(Interval::point)
    }
}

/// A form over `Q(a)` rewritten as `e` forms over `Q` in `n * e` unknowns.
#[derive(Clone, Debug)]
pub struct RestrictedSystem {
    pub field: Arc<ExtField>,
    pub n: usize,
    /// `forms[k]` is the coefficient of `a^k`.
    pub forms: Vec<Polynomial<Q>>,
}

impl RestrictedSystem {
    /// `x_i = sum_k y_{i e + k} a^k`.
    pub fn lift_point(&self, y: &[Q]) -> Vec<ExtElem> {
        let e = self.field.degree();
        (0..self.n)
            .map(|i| self.field.element(&y[i * e..(i + 1) * e]))
            .collect()
    }
}

/// Substitutes `x_i = sum_k y_{i,k} a^k` into `f` and splits by powers of
/// `a`. A rational zero of the returned system lifts to a zero of `f`, and
/// a nonzero one lifts to a nonzero one.
pub fn restriction_of_scalars(field: &Arc<ExtField>, f: &Polynomial<ExtElem>) -> Result<RestrictedSystem> {
    for (_, c) in f.terms() {
        if let Some(g) = c.field() {
            if !Arc::ptr_eq(g, field) && **g != **field {
                return Err(Error::contract("coefficient from a different extension"));
            }
        }
    }
    let n = f.nvars();
    let e = field.degree();
    let total = n * e;
    let images: Vec<Polynomial<ExtElem>> = (0..n)
        .map(|i| {
            let mut img = Polynomial::zero(total);
            for k in 0..e {
                let ak = field.generator().pow(k as u32);
                img.add_term(Monomial::var(i * e + k, 1), ak);
            }
            img
        })
        .collect();
    let g = f.compose(&images, total);
    let mut forms = vec![Polynomial::zero(total); e];
    for (m, c) in g.terms() {
        for (k, form) in forms.iter_mut().enumerate() {
            let v = c.rep.coeff(k);
            if !Scalar::is_zero(&v) {
                form.add_term(m.clone(), v);
            }
        }
    }
    Ok(RestrictedSystem {
        field: field.clone(),
        n,
        forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    #[test]
    fn gaussian_inverse() {
        let k = ExtField::new(UPoly::from_ints(&[1, 0, 1])).unwrap();
        let i = k.generator();
        let z = i.add(&ExtElem::one());
        let w = z.inv().unwrap();
        assert!(z.mul(&w).is_one());
        assert!(i.mul(&i).add(&ExtElem::one()).is_zero());
    }

    #[test]
    fn restriction_matches_evaluation() {
        // f = x1^3 + a x2^3 over Q(cbrt 2)
        let k = ExtField::new(UPoly::from_ints(&[-2, 0, 0, 1])).unwrap();
        let a = k.generator();
        let mut f = Polynomial::zero(2);
        f.add_term(Monomial::var(0, 3), ExtElem::one());
        f.add_term(Monomial::var(1, 3), a);
        let sys = restriction_of_scalars(&k, &f).unwrap();
        assert_eq!(sys.forms.len(), 3);
        let y: Vec<Q> = [1, -2, 0, 3, 1, -1].iter().map(|&v| qf(v)).collect();
        let x = sys.lift_point(&y);
        let fx = f.evaluate(&x).unwrap();
        for k in 0..3 {
            assert_eq!(sys.forms[k].evaluate(&y).unwrap(), fx.coords(3)[k]);
        }
    }
}
