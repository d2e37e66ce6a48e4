//! A diagonal cubic specialized to the pencil `x y^2 + a y^3` on a plane.
//!
//! Run with `cargo run --example diagonal_specialization`.

use birch::fields::{DiagonalEquation, SolverBudget};
use birch::pipeline::specialize_diagonal;
use birch::scalar::{RealAlg, Scalar, Q};

fn main() -> birch::Result<()> {
    let coeffs: Vec<RealAlg> = [3, -1, 2, 5, -4, 7].iter().map(|&c| RealAlg::from_i64(c)).collect();
    let eq = DiagonalEquation::new(coeffs, 3)?;
    let spec = specialize_diagonal(&eq, None, &SolverBudget::with_seed(3))?;
    let show = |v: &[RealAlg]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
    println!("v = ({})", show(&spec.v));
    println!("w = ({})", show(&spec.w));
    println!("a = {}", spec.a);
    println!("method: {}", spec.method);
    println!("f(x v + y w) = x y^2 + a y^3 exactly: {}", spec.verify(&eq));

    // rational coefficients stay rational when the pencil is found over Q
    let rational = DiagonalEquation::new([1, 1, -1, -1, 2, -2].iter().map(|&c| Q::from_i64(c)).collect(), 3)?;
    let spec = specialize_diagonal(&rational, None, &SolverBudget::with_seed(3))?;
    println!("over Q: a = {}, verified {}", spec.a, spec.verify(&rational));
    Ok(())
}
