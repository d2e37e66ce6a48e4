//! The diagonal leaf solver over each Birch field.
//!
//! Run with `cargo run --example diagonal_oracles`.

use birch::fields::{solve_diagonal, BirchField, DiagonalSolution, SolverBudget};
use birch::scalar::{RatFunc, Scalar, Q};

fn constants(cs: &[i64]) -> Vec<RatFunc> {
    cs.iter().map(|&c| RatFunc::from_i64(c)).collect()
}

fn main() -> birch::Result<()> {
    let budget = SolverBudget::with_seed(7);

    // over R the oracle takes an exact odd root: x = 1, y = -(3/4)^(1/3)
    match solve_diagonal(BirchField::RealClosed, &constants(&[3, 4, 5]), 3, &budget)? {
        DiagonalSolution::Real(x) => {
            let shown: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            println!("over R: ({})", shown.join(", "));
        }
        other => unreachable!("{other:?}"),
    }

    // x^3 + 2y^3 - 3z^3 = 0 has the rational point (1, 1, 1)
    if let DiagonalSolution::Rational(x) = solve_diagonal(BirchField::Rationals, &constants(&[1, 2, -3]), 3, &budget)? {
        let shown: Vec<String> = x.iter().map(Q::to_string).collect();
        println!("over Q: ({})", shown.join(", "));
    }

    // over R(t1): coefficients 1, t1, t1^2 + 1, -2 in four variables
    let t = RatFunc::param(1, 0);
    let coeffs = vec![RatFunc::one(), t.clone(), t.mul(&t).add(&RatFunc::one()), RatFunc::from_i64(-2)];
    if let DiagonalSolution::FunctionField(sol) = solve_diagonal(BirchField::RealFunctionField { p: 1 }, &coeffs, 3, &budget)? {
        println!("over R(t1): method {}, expansion degree {:?}", sol.method, sol.s);
        match &sol.exact {
            Some(x) => println!("  exact point with {} polynomial coordinates", x.len()),
            None => println!("  enclosure, largest residual coefficient {}", sol.max_residual()),
        }
    }
    Ok(())
}
