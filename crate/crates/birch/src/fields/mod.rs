//! Birch fields and their diagonal-equation oracles.
//!
//! A field is usable by the pipeline when it can find nonzero zeros of odd
//! degree diagonal forms in enough variables. Three kinds are supported:
//! the real numbers (through exact real algebraic numbers), real rational
//! function fields `R(t1..tp)` (through Tsen's expansion), and the
//! rationals (through bounded search, which may give up).

mod diagonal;
mod realsys;
mod restriction;
mod tsen;

pub use diagonal::{is_rational_zero, solve_diagonal, solve_diagonal_rational, solve_diagonal_real, DiagonalSolution};
pub use realsys::{solve_real_odd_system, solve_real_odd_system_numeric, RealSolution};
pub use restriction::{restriction_of_scalars, ExtElem, ExtField, RestrictedSystem};
pub use tsen::{
    choose_expansion_degree, clear_denominators, evaluate_in_parameters, multi_indices, solve_diagonal_function_field, split_parameters, tsen_reduce,
    FunctionFieldSolution, TsenReduction,
};

use std::fmt;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::scalar::{exact_root, q, RealAlg, RealScalar, Scalar, Q};

/// A supported base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BirchField {
    RealClosed,
    RealFunctionField { p: usize },
    Rationals,
}

impl BirchField {
    /// Known upper bound for `N_K(d)`, the number of variables that forces
    /// a nonzero zero of every diagonal form of odd degree `d`.
    pub fn nk_table(&self, d: u32) -> Option<usize> {
        if d.is_multiple_of(2) {
            return None;
        }
        match self {
            BirchField::RealClosed => Some(2),
            BirchField::RealFunctionField { p } => {
                Some((d as usize).checked_pow(*p as u32)? + 1)
            }
            BirchField::Rationals => None,
        }
    }

    /// Parses `Q`, `R`, `R(t1)`, `R(t1,t2)` or `R(t1..t3)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "Q" | "QQ" => return Ok(BirchField::Rationals),
            "R" | "RR" => return Ok(BirchField::RealClosed),
            _ => {}
        }
        let inner = t
            .strip_prefix("R(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::contract(format!("unknown field `{text}`; use Q, R or R(t1..tp)")))?;
        let parse_t = |s: &str| -> Result<usize> {
            s.strip_prefix('t')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::contract(format!("bad parameter `{s}` in field `{text}`")))
        };
        let p = if let Some((a, b)) = inner.split_once("..") {
            let (a, b) = (parse_t(a)?, parse_t(b)?);
            if a != 1 || b < a {
                return Err(Error::contract("parameters must run t1..tp"));
            }
            b
        } else {
            let idx: Vec<usize> = inner.split(',').map(parse_t).collect::<Result<_>>()?;
            if idx.iter().enumerate().any(|(i, &n)| n != i + 1) {
                return Err(Error::contract("parameters must be t1, t2, ... in order"));
            }
            idx.len()
        };
        if inner.contains("Q") {
            return Err(Error::unsupported("Q(t) is not a supported field"));
        }
        Ok(BirchField::RealFunctionField { p })
    }
}

impl fmt::Display for BirchField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BirchField::RealClosed => write!(f, "R"),
            BirchField::Rationals => write!(f, "Q"),
            BirchField::RealFunctionField { p: 1 } => write!(f, "R(t1)"),
            BirchField::RealFunctionField { p } => write!(f, "R(t1..t{p})"),
        }
    }
}

/// Limits and seed for every randomized or bounded search.
#[derive(Clone, Debug)]
pub struct SolverBudget {
    /// Largest numerator or denominator tried by rational searches.
    pub height_bound: u64,
    pub restarts: u32,
    pub newton_iters: u32,
    pub residual_tol: Q,
    pub seed: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            height_bound: 30,
            restarts: 32,
            newton_iters: 80,
            residual_tol: q(1, 1_000_000_000),
            seed: 0,
        }
    }
}

impl SolverBudget {
    pub fn with_seed(seed: u64) -> Self {
        SolverBudget {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.height_bound == 0 || self.restarts == 0 || self.newton_iters == 0 {
            return Err(Error::contract("budget entries must be positive"));
        }
        if !self.residual_tol.is_positive() {
            return Err(Error::contract("residual tolerance must be positive"));
        }
        Ok(())
    }

    /// Deterministic generator for a named sub-stream of this budget's seed.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

/// `a_1 x_1^d + ... + a_n x_n^d`.
#[derive(Clone, Debug)]
pub struct DiagonalEquation<F> {
    coeffs: Vec<F>,
    degree: u32,
}

impl<F: Scalar> DiagonalEquation<F> {
    pub fn new(coeffs: Vec<F>, degree: u32) -> Result<Self> {
        if degree.is_multiple_of(2) {
            return Err(Error::contract(format!(
                "diagonal degree {degree} is even; Birch fields only handle odd degrees"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::contract("diagonal equation needs a variable"));
        }
        if coeffs.iter().any(|c| c.is_zero_exact() != Some(false)) {
            return Err(Error::contract("diagonal coefficients must be nonzero"));
        }
        Ok(DiagonalEquation { coeffs, degree })
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, x: &[F]) -> F {
        self.coeffs
            .iter()
            .zip(x)
            .fold(F::zero(), |acc, (a, v)| acc.add(&a.mul(&v.pow(self.degree))))
    }
}

/// A random integer in `[-h, h]`.
pub fn random_int(rng: &mut impl Rng, h: i64) -> Q {
    Q::from_integer(rng.gen_range(-h..=h).into())
}

/// A random nonzero integer in `[-h, h]`.
pub fn random_nonzero(rng: &mut impl Rng, h: i64) -> Q {
    loop {
        let v = rng.gen_range(-h..=h);
        if v != 0 {
            return Q::from_integer(v.into());
        }
    }
}

/// Exact scalars the pipeline can run over: ordered fields with an
/// oracle for odd-degree diagonal equations and for real roots.
pub trait BaseScalar: RealScalar {
    fn field() -> BirchField;

    /// Real `d`-th root for odd `d`, when it lies in the field.
    fn odd_root(&self, d: u32) -> Option<Self>;

    /// A root of `p` in `(lo, hi)`, where `p` changes sign, when the field
    /// contains one there.
    fn root_between(p: &UPoly<Self>, lo: &Q, hi: &Q) -> Result<Self>;

    fn solve_diagonal_eq(eq: &DiagonalEquation<Self>, budget: &SolverBudget) -> Result<Vec<Self>>;

    /// Rational approximation for seeding searches.
    fn rational_approx(&self) -> Q;

    /// The exact point of a real solution, when it lies in the field.
    fn from_real_solution(sol: &RealSolution) -> Option<Vec<Self>>;
}

impl BaseScalar for Q {
    fn field() -> BirchField {
        BirchField::Rationals
    }

    fn odd_root(&self, d: u32) -> Option<Self> {
        exact_root(self, d)
    }

    fn root_between(p: &UPoly<Q>, lo: &Q, hi: &Q) -> Result<Q> {
        let sf = p.squarefree_part();
        let mut candidates = Vec::new();
        if sf.degree() == Some(1) {
            candidates.push(-sf.coeff(0) / sf.coeff(1));
        } else {
            for (a, b) in sf.isolate_real_roots() {
                let (a, b) = sf.refine_root(&a, &b, &q(1, 1 << 40));
                let mid = (&a + &b) / Q::from_integer(2.into());
                if let Some(r) =
                    crate::scalar::continued_fraction_reconstruct(&mid, &(1u64 << 20).into())
                {
                    candidates.push(r);
                }
            }
        }
        candidates
            .into_iter()
            .find(|r| sf.sign_at(r) == 0 && lo < r && r < hi)
            .ok_or_else(|| Error::not_found("rational root", "no rational root in the interval"))
    }

    fn solve_diagonal_eq(eq: &DiagonalEquation<Q>, budget: &SolverBudget) -> Result<Vec<Q>> {
        solve_diagonal_rational(eq, budget)
    }

    fn rational_approx(&self) -> Q {
        self.clone()
    }

    fn from_real_solution(sol: &RealSolution) -> Option<Vec<Q>> {
        if let Some(r) = &sol.rational {
            return Some(r.clone());
        }
        sol.exact.as_ref()?.iter().map(|x| x.as_rational()).collect()
    }
}

impl BaseScalar for RealAlg {
    fn field() -> BirchField {
        BirchField::RealClosed
    }

    fn odd_root(&self, d: u32) -> Option<Self> {
        RealAlg::odd_root(self, d).ok()
    }

    fn root_between(p: &UPoly<RealAlg>, lo: &Q, hi: &Q) -> Result<RealAlg> {
        RealAlg::adjoin_root(None, p, lo, hi)
    }

    fn solve_diagonal_eq(eq: &DiagonalEquation<RealAlg>, _budget: &SolverBudget) -> Result<Vec<RealAlg>> {
        solve_diagonal_real(eq)
    }

    fn rational_approx(&self) -> Q {
        self.approx_rational(&q(1, 1 << 50))
    }

    fn from_real_solution(sol: &RealSolution) -> Option<Vec<RealAlg>> {
        if let Some(x) = &sol.exact {
            return Some(x.clone());
        }
        Some(sol.rational.as_ref()?.iter().cloned().map(RealAlg::rational).collect())
    }
}
