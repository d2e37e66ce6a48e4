use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{Q, RealScalar, Scalar};

/// Bits kept after the binary point when endpoints are rounded outward.
pub const DEFAULT_PRECISION_BITS: u32 = 200;

/// A closed interval `[lo, hi]` with rational endpoints.
///
/// Results of arithmetic contain every value obtainable from members of the
/// operands. Endpoints are rounded outward onto a dyadic grid so their size
/// stays bounded under long evaluation chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Q,
    hi: Q,
}

fn round_down(x: &Q, bits: u32) -> Q {
    if x.denom().bits() <= bits as u64 {
        return x.clone();
    }
    let scale = BigInt::one() << bits;
    let scaled = x * Q::from_integer(scale.clone());
    Q::new(scaled.floor().to_integer(), scale)
}

fn round_up(x: &Q, bits: u32) -> Q {
    if x.denom().bits() <= bits as u64 {
        return x.clone();
    }
    let scale = BigInt::one() << bits;
    let scaled = x * Q::from_integer(scale.clone());
    Q::new(scaled.ceil().to_integer(), scale)
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// The interval `[x - r, x + r]`.
    pub fn ball(x: &Q, radius: &Q) -> Self {
        Interval::new(x - radius, x + radius)
    }

    /// The float `x` widened by `radius`, exact in its endpoints.
    pub fn from_f64(x: f64, radius: f64) -> Self {
        let c = Q::from_float(x).expect("finite");
        let r = Q::from_float(radius.abs()).expect("finite");
        Interval::ball(&c, &r)
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::INFINITY)
    }

    /// Largest absolute value of a member.
    pub fn magnitude(&self) -> Q {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `other` lies in the interior of `self`.
    pub fn contains_interior(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(Interval::new(lo.clone(), hi.clone()))
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi > other.hi { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone())
    }

    /// Outward rounding of both endpoints to `bits` binary digits.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    /// Sign of every member, if it is the same for all of them.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if num_traits::Zero::is_zero(&self.lo) && num_traits::Zero::is_zero(&self.hi) {
            Some(0)
        } else {
            None
        }
    }

    /// Tight enclosure of `x^e`, handling even powers of intervals that
    /// straddle zero.
    pub fn powi(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(<Q as num_traits::One>::one());
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        let out = if e % 2 == 1 {
            Interval::new(a, b)
        } else if self.contains_zero() {
            Interval::new(<Q as num_traits::Zero>::zero(), if a > b { a } else { b })
        } else if a < b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        };
        out.round_out(DEFAULT_PRECISION_BITS)
    }

    pub fn split(&self) -> (Interval, Interval) {
        let m = self.midpoint();
        (
            Interval::new(self.lo.clone(), m.clone()),
            Interval::new(m, self.hi.clone()),
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

fn min_max(values: [Q; 4]) -> (Q, Q) {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in &values[1..] {
        if v.cmp(&lo) == Ordering::Less {
            lo = v.clone();
        }
        if v.cmp(&hi) == Ordering::Greater {
            hi = v.clone();
        }
    }
    (lo, hi)
}

impl Scalar for Interval {
    fn zero() -> Self {
        Interval::point(<Q as num_traits::Zero>::zero())
    }
    fn one() -> Self {
        Interval::point(<Q as num_traits::One>::one())
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(&self.lo) && num_traits::Zero::is_zero(&self.hi)
    }
    fn add(&self, rhs: &Self) -> Self {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
        .round_out(DEFAULT_PRECISION_BITS)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
        .round_out(DEFAULT_PRECISION_BITS)
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (lo, hi) = min_max([
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ]);
        Interval { lo, hi }.round_out(DEFAULT_PRECISION_BITS)
    }
    fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(
            Interval {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            }
            .round_out(DEFAULT_PRECISION_BITS),
        )
    }
    fn from_rational(value: &Q) -> Self {
        Interval::point(value.clone())
    }
    fn is_zero_exact(&self) -> Option<bool> {
        if !self.contains_zero() {
            Some(false)
        } else if self.is_zero() {
            Some(true)
        } else {
            None
        }
    }
    fn as_rational(&self) -> Option<Q> {
        (self.lo == self.hi).then(|| self.lo.clone())
    }
    fn enclosure(&self) -> Option<Interval> {
        Some(self.clone())
    }
    fn pow(&self, exp: u32) -> Self {
        self.powi(exp)
    }
    fn is_exact_kind() -> bool {
        false
    }
}

impl RealScalar for Interval {
    fn signum(&self) -> Option<i32> {
        self.sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn arithmetic_contains_true_values() {
        let a = Interval::new(q(-1, 2), q(1, 3));
        let b = Interval::new(q(2, 1), q(3, 1));
        let p = a.mul(&b);
        assert!(p.contains(&q(-3, 2)) && p.contains(&q(1, 1)));
        assert_eq!(a.powi(2).lo(), &<Q as num_traits::Zero>::zero());
        assert!(a.inv().is_none());
        assert_eq!(b.inv().unwrap(), Interval::new(q(1, 3), q(1, 2)));
    }

    #[test]
    fn rounding_is_outward() {
        let x = Interval::point(q(1, 3)).round_out(8);
        assert!(x.contains(&q(1, 3)));
        assert!(x.width() <= q(1, 128));
    }
}
