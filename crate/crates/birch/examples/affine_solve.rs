//! Affine equations `H(x) = c` over R and over R(t1).
//!
//! Run with `cargo run --example affine_solve`.

use birch::fields::{BirchField, SolverBudget};
use birch::pipeline::{solve_affine, PipelineConfig, System};

fn main() -> birch::Result<()> {
    let budget = SolverBudget::with_seed(11);
    let config = PipelineConfig::default();

    let sys = System::parse("2*x1^3 - 3*x2^3 + x3^3 + 5*x4^3 = 1", BirchField::RealClosed, None)?;
    print!("{}", solve_affine(&sys, BirchField::RealClosed, &config, &budget)?.to_text());

    println!();
    let field = BirchField::RealFunctionField { p: 1 };
    let sys = System::parse("x1^3 + t1*x2^3 + (t1^2 + 1)*x3^3 - x4^3 = t1", field, None)?;
    print!("{}", solve_affine(&sys, field, &config, &budget)?.to_text());
    Ok(())
}
