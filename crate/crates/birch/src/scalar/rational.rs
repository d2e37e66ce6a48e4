use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Interval, RealScalar, Scalar};

/// Exact rationals.
pub type Q = BigRational;

/// Shorthand for the rational `n / d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn qf(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl Scalar for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Q as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if <Q as Zero>::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(value: &Q) -> Self {
        value.clone()
    }
    fn as_rational(&self) -> Option<Q> {
        Some(self.clone())
    }
    fn enclosure(&self) -> Option<Interval> {
        Some(Interval::point(self.clone()))
    }
}

impl RealScalar for Q {
    fn signum(&self) -> Option<i32> {
        Some(match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        })
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Parses `"3"`, `"-3/4"` or a finite decimal such as `"1.25"`.
pub fn parse_rational(text: &str) -> Option<Q> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

fn exact_int_root(n: &BigInt, d: u32) -> Option<BigInt> {
    if n.is_negative() {
        if d.is_multiple_of(2) {
            return None;
        }
        return exact_int_root(&-n, d).map(|r| -r);
    }
    let r = n.nth_root(d);
    if num_traits::pow(r.clone(), d as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// The rational `d`-th root of `value`, if it exists.
pub fn exact_root(value: &Q, d: u32) -> Option<Q> {
    let n = exact_int_root(value.numer(), d)?;
    let m = exact_int_root(value.denom(), d)?;
    Some(Q::new(n, m))
}

/// Continued-fraction convergents of `x`, keeping the last one whose
/// numerator and denominator stay within `height`.
pub fn best_rational_approx(x: f64, height: u64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let exact = Q::from_float(x)?;
    continued_fraction_reconstruct(&exact, &BigInt::from(height))
}

/// Rational reconstruction by continued fractions: the last convergent of
/// `x` with numerator and denominator bounded by `height`.
pub fn continued_fraction_reconstruct(x: &Q, height: &BigInt) -> Option<Q> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    let mut best: Option<Q> = None;
    for _ in 0..200 {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if p2.abs() > *height || q2.abs() > *height {
            break;
        }
        best = Some(Q::new(p2.clone(), q2.clone()));
        let frac = &rest - Q::from_integer(a);
        if <Q as Zero>::is_zero(&frac) {
            break;
        }
        rest = frac.recip();
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    best
}

/// Height `max(|num|, |den|)` of a rational.
pub fn height(x: &Q) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().abs();
    if n > d {
        n
    } else {
        d
    }
}

/// lcm of the denominators of a slice of rationals.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("-3/4"), Some(q(-3, 4)));
        assert_eq!(parse_rational("1.25"), Some(q(5, 4)));
        assert_eq!(parse_rational("-0.5"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(qf(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&q(-8, 27), 3), Some(q(-2, 3)));
        assert_eq!(exact_root(&qf(2), 3), None);
        assert_eq!(exact_root(&qf(32), 5), Some(qf(2)));
    }

    #[test]
    fn reconstructs_simple_fractions() {
        let r = best_rational_approx(1.0 / 3.0 + 1e-15, 1000).unwrap();
        assert_eq!(r, q(1, 3));
        let r = best_rational_approx(-std::f64::consts::FRAC_1_SQRT_2, 100).unwrap();
        assert_eq!(r, q(-70, 99));
    }
}
