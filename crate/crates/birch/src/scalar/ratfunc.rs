use std::fmt;


use super::{Interval, Scalar, Q};
use crate::poly::{format_polynomial, make_monic, poly_gcd, Polynomial};

/// An element of `Q(t1, ..., tp)` in lowest terms with a monic denominator
/// (leading coefficient 1 in graded-lexicographic order), so equal values
/// have equal representations.
///
/// Constants carry an empty context; contexts grow to the larger one when
/// two elements meet.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Polynomial<Q>,
    den: Polynomial<Q>,
}

fn widen(p: &Polynomial<Q>, n: usize) -> Polynomial<Q> {
    if p.nvars() >= n {
        p.clone()
    } else {
        p.extend(n)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        let n = self.num.nvars().max(other.num.nvars());
        widen(&self.num, n) == widen(&other.num, n) && widen(&self.den, n) == widen(&other.den, n)
    }
}

impl RatFunc {
    /// `num / den`, normalized. Panics on a zero denominator.
    pub fn new(num: Polynomial<Q>, den: Polynomial<Q>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let n = num.nvars().max(den.nvars());
        let (num, den) = (widen(&num, n), widen(&den, n));
        if num.is_zero() {
            return RatFunc {
                num: Polynomial::zero(0),
                den: Polynomial::one(0),
            };
        }
        let g = poly_gcd(&num, &den);
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let num = num.scale(&lc.recip());
        let den = make_monic(&den);
        RatFunc { num, den }
    }

    pub fn from_poly(p: Polynomial<Q>) -> Self {
        let n = p.nvars();
        RatFunc::new(p, Polynomial::one(n))
    }

    /// The generator `t_{i+1}` in a context of `p` parameters.
    pub fn param(p: usize, i: usize) -> Self {
        RatFunc::from_poly(Polynomial::var(p, i))
    }

    pub fn numer(&self) -> &Polynomial<Q> {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial<Q> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Value at a rational parameter point, `None` on a pole.
    pub fn evaluate(&self, t: &[Q]) -> Option<Q> {
        let pad = |p: &Polynomial<Q>| -> Option<Q> {
            let mut pt = t.to_vec();
            pt.resize(p.nvars().max(t.len()), Q::from_i64(0));
            widen(p, pt.len()).evaluate(&pt).ok()
        };
        let d = pad(&self.den)?;
        if Scalar::is_zero(&d) {
            return None;
        }
        Some(pad(&self.num)? / d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.num.nvars().max(self.den.nvars()))
            .map(|i| format!("t{i}"))
            .collect();
        let n = format_polynomial(&self.num, &names);
        if self.den.degree() == Some(0) {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", format_polynomial(&self.den, &names))
        }
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Polynomial::zero(0),
            den: Polynomial::one(0),
        }
    }
    fn one() -> Self {
        RatFunc {
            num: Polynomial::one(0),
            den: Polynomial::one(0),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let n = self.num.nvars().max(rhs.num.nvars());
        let (a, b) = (widen(&self.num, n), widen(&self.den, n));
        let (c, d) = (widen(&rhs.num, n), widen(&rhs.den, n));
        if b == d {
            return RatFunc::new(a.add(&c), b);
        }
        RatFunc::new(a.mul(&d).add(&c.mul(&b)), b.mul(&d))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let n = self.num.nvars().max(rhs.num.nvars());
        RatFunc::new(
            widen(&self.num, n).mul(&widen(&rhs.num, n)),
            widen(&self.den, n).mul(&widen(&rhs.den, n)),
        )
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rational(value: &Q) -> Self {
        RatFunc::from_poly(Polynomial::constant(0, value.clone()))
    }
    fn as_rational(&self) -> Option<Q> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            let n = self.num.leading().map(|(_, c)| c.clone()).unwrap_or_else(|| Q::from_i64(0));
            let d = self.den.leading().map(|(_, c)| c.clone()).unwrap_or_else(<Q as num_traits::One>::one);
            Some(n / d)
        } else {
            None
        }
    }
    fn enclosure(&self) -> Option<Interval> {
        self.as_rational().map(Interval::point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    #[test]
    fn normalizes() {
        let t = RatFunc::param(1, 0);
        let one = RatFunc::one();
        // (t^2 - 1)/(t - 1) = t + 1
        let a = t.mul(&t).sub(&one).div(&t.sub(&one)).unwrap();
        assert_eq!(a, t.add(&one));
        assert!(a.is_polynomial());
        // 1/t + 1/t = 2/t
        let inv = t.inv().unwrap();
        assert_eq!(inv.add(&inv), RatFunc::from_rational(&qf(2)).div(&t).unwrap());
        assert!(t.sub(&t).is_zero());
        assert_eq!(inv.evaluate(&[qf(4)]), Some(Q::new(1.into(), 4.into())));
    }

    #[test]
    fn two_parameters() {
        let t1 = RatFunc::param(2, 0);
        let t2 = RatFunc::param(2, 1);
        let x = t1.mul(&t2).div(&t1.add(&t2)).unwrap();
        let back = x.mul(&t1.add(&t2)).div(&t2).unwrap();
        assert_eq!(back, t1);
        assert_eq!(format!("{}", x), "(t1*t2)/(t1 + t2)");
    }
}
