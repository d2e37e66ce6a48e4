//! Dense univariate polynomials, used for number-field moduli, line
//! restrictions and root isolation.

use std::fmt;

use num_traits::Signed;

use crate::scalar::{Interval, Scalar, Q};

/// Dense univariate polynomial, coefficients from degree 0 upward, with no
/// structurally zero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        UPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UPoly::new(vec![F::zero(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Removes leading coefficients that are semantically zero.
    pub fn trim_exact(mut self) -> Self {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.is_zero_exact() == Some(true))
        {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::constant(F::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&F::from_i64(i as i64)))
                .collect(),
        )
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Division with remainder; `None` if the divisor's leading coefficient
    /// is not invertible.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let inv = divisor.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((UPoly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&inv);
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&c.mul(dc));
                }
            }
            rem[k + dd] = F::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((UPoly::new(quot), UPoly::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Option<Self> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    pub fn monic(&self) -> Option<Self> {
        let inv = self.leading()?.inv()?;
        Some(self.scale(&inv))
    }

    /// Monic gcd by the Euclidean algorithm, using semantic zero tests on
    /// remainders. `None` when a leading coefficient cannot be inverted.
    pub fn gcd(&self, other: &Self) -> Option<Self> {
        let mut a = self.clone().trim_exact();
        let mut b = other.clone().trim_exact();
        while !b.is_zero() {
            let r = a.rem(&b)?.trim_exact();
            a = b;
            b = r;
        }
        if a.is_zero() {
            Some(a)
        } else {
            a.monic()
        }
    }

    /// Extended gcd: `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Option<(Self, Self, Self)> {
        let (mut r0, mut r1) = (self.clone().trim_exact(), other.clone().trim_exact());
        let (mut s0, mut s1) = (UPoly::constant(F::one()), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::constant(F::one()));
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1)?;
            let r = r.trim_exact();
            let s = s0.sub(&qt.mul(&s1));
            let t = t0.sub(&qt.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading()?.inv()?;
        Some((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Interval evaluation from enclosures of the coefficients.
    pub fn eval_interval(&self, x: &Interval) -> Option<Interval> {
        let mut acc = Interval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.enclosure()?);
        }
        Some(acc)
    }
}

impl UPoly<Q> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Q::from_i64(c)).collect())
    }

    /// Sign of the value at a rational point.
    pub fn sign_at(&self, x: &Q) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    /// `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative()).expect("rational gcd");
        let (q, _) = self.div_rem(&g).expect("nonzero gcd");
        q.monic().expect("nonzero")
    }

    /// All rational roots, increasing. A root `p/q` in lowest terms has
    /// `q` dividing the leading coefficient of the integer-cleared
    /// polynomial, so `lead * root` is an integer that a narrow isolating
    /// interval pins down.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree_part();
        let den = crate::scalar::denominator_lcm(sf.coeffs.iter());
        let lead = (sf.leading().expect("nonzero") * Q::from_integer(den)).abs();
        let width = Q::new(1.into(), 2.into()) / &lead;
        let mut out = Vec::new();
        for (lo, hi) in sf.isolate_real_roots() {
            let (lo, hi) = sf.refine_root(&lo, &hi, &width);
            let k = (&lo * &lead).floor();
            for cand in [k.clone(), k + <Q as num_traits::One>::one()] {
                let r = cand / &lead;
                if lo <= r && r <= hi && sf.sign_at(&r) == 0 {
                    out.push(r);
                    break;
                }
            }
        }
        out
    }

    /// Bound on the absolute value of every real root.
    pub fn root_bound(&self) -> Q {
        let lead = self.leading().expect("nonzero").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(<Q as num_traits::Zero>::zero(), |a, b| if a > b { a } else { b });
        m + <Q as num_traits::One>::one()
    }

    fn sturm_sequence(&self) -> Vec<UPoly<Q>> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero").neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    fn sign_changes(seq: &[UPoly<Q>], x: &Q) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| p.sign_at(x))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Q, b: &Q) -> usize {
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a) - Self::sign_changes(&seq, b)
    }

    /// Disjoint open intervals `(lo, hi)`, each containing exactly one real
    /// root, with endpoints that are not roots. Roots are listed increasing.
    pub fn isolate_real_roots(&self) -> Vec<(Q, Q)> {
        let sf = self.squarefree_part();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let seq = sf.sturm_sequence();
        let b = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_changes(&seq, &lo) - Self::sign_changes(&seq, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 && sf.sign_at(&hi) != 0 && sf.sign_at(&lo) != 0 {
                out.push((lo, hi));
                continue;
            }
            let mut mid = (&lo + &hi) / Q::from_integer(2.into());
            if sf.sign_at(&mid) == 0 {
                // keep endpoints off roots
                let shift = (&hi - &lo) / Q::from_integer(7.into());
                mid += shift;
            }
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Bisects a sign-changing interval until its width is below `width`.
    pub fn refine_root(&self, lo: &Q, hi: &Q, width: &Q) -> (Q, Q) {
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        let slo = self.sign_at(&lo);
        debug_assert!(slo != 0 && slo != self.sign_at(&hi));
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            let s = self.sign_at(&mid);
            if s == 0 {
                let eps = (&hi - &lo) / Q::from_integer(1024.into());
                return (&mid - &eps, &mid + &eps);
            }
            if s == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

impl<F: Scalar> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = super::Polynomial::from_terms(
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32], c.clone())),
        );
        write!(f, "{}", super::format_polynomial(&p, &["z".to_string()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn gcd_and_division() {
        let a = UPoly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = UPoly::from_ints(&[1, 1]); // x + 1
        assert_eq!(a.gcd(&b).unwrap(), b);
        let (g, s, t) = a.ext_gcd(&UPoly::from_ints(&[2, 1])).unwrap();
        assert_eq!(g, UPoly::from_ints(&[1]));
        assert_eq!(s.mul(&a).add(&t.mul(&UPoly::from_ints(&[2, 1]))), g);
    }

    #[test]
    fn isolates_roots() {
        // (x - 1)(x + 2)(x - 1/2)^2
        let p = UPoly::from_ints(&[-1, 1])
            .mul(&UPoly::from_ints(&[2, 1]))
            .mul(&UPoly::new(vec![q(-1, 2), q(1, 1)]).pow(2));
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 3);
        assert!(roots[0].0 < q(-2, 1) && q(-2, 1) < roots[0].1);
        let cubic = UPoly::from_ints(&[-2, 0, 0, 1]);
        let r = cubic.isolate_real_roots();
        assert_eq!(r.len(), 1);
        let (lo, hi) = cubic.refine_root(&r[0].0, &r[0].1, &q(1, 1 << 20));
        assert!(lo < q(126, 100) && hi > q(125, 100));
    }

    #[test]
    fn rational_roots_only() {
        // (3x - 2)(x + 5)(x^2 - 2)
        let p = UPoly::from_ints(&[-2, 3])
            .mul(&UPoly::from_ints(&[5, 1]))
            .mul(&UPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(p.rational_roots(), vec![q(-5, 1), q(2, 3)]);
        assert!(UPoly::from_ints(&[-2, 0, 0, 1]).rational_roots().is_empty());
    }
}
