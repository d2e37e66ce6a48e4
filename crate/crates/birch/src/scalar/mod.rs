//! Coefficient fields.
//!
//! Four concrete kinds implement [`Scalar`]:
//!
//! * [`Q`]: exact rationals.
//! * [`RatFunc`]: exact rational functions in `t1..tp` over the rationals.
//! * [`RealAlg`]: exact real algebraic numbers, stored as elements of a real
//!   number field with a distinguished embedding.
//! * [`Interval`]: verified reals, closed intervals with rational endpoints.
//!
//! Exact kinds decide equality. `Interval` never reports equality with zero
//! unless it is the degenerate interval `[0, 0]`; callers ask for containment
//! instead.

mod interval;
mod ratfunc;
mod rational;
mod realalg;

pub use interval::Interval;
pub use ratfunc::RatFunc;
pub use rational::{height, denominator_lcm, 
    best_rational_approx, continued_fraction_reconstruct, exact_root, parse_rational, q, qf,
    rational_from_f64, Q,
};
pub use realalg::{NumberField, RealAlg};

use std::fmt;

/// Elements of a coefficient field of characteristic zero.
///
/// Arithmetic is by reference and never panics for well-formed inputs; the
/// only partial operation is [`Scalar::inv`].
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;

    /// Structural zero test. Exact for `Q` and `RatFunc`; for `RealAlg` it
    /// only recognises the zero representative (see [`Scalar::is_zero_exact`]);
    /// for `Interval` it means the degenerate interval `[0, 0]`.
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse, `None` when the element is (or may be) zero.
    fn inv(&self) -> Option<Self>;

    fn from_rational(value: &Q) -> Self;

    fn from_i64(value: i64) -> Self {
        Self::from_rational(&Q::from_integer(value.into()))
    }

    /// Semantic zero test. `None` when the kind cannot decide (intervals
    /// straddling zero).
    fn is_zero_exact(&self) -> Option<bool> {
        Some(self.is_zero())
    }

    /// The element as a rational number, when it is one.
    fn as_rational(&self) -> Option<Q>;

    /// A rational interval containing the element, for kinds embedded in the
    /// reals.
    fn enclosure(&self) -> Option<Interval>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
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

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    /// Whether equality is decidable for this kind.
    fn is_exact_kind() -> bool {
        true
    }
}

/// Scalars with a sign, i.e. embedded in the reals.
pub trait RealScalar: Scalar {
    /// Sign of the element, `None` if undecidable.
    fn signum(&self) -> Option<i32>;

    fn approx(&self) -> f64 {
        self.enclosure()
            .map(|iv| iv.midpoint_f64())
            .unwrap_or(f64::NAN)
    }
}
