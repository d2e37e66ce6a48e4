//! Replacing low-strength forms by odd-degree generators until every
//! generator clears a strength threshold.
//!
//! Run with `cargo run --example regularization`.

use birch::fields::SolverBudget;
use birch::poly::parse_system;
use birch::strength::{regularize, Threshold};

fn main() -> birch::Result<()> {
    let parsed = parse_system("x1*(x2^2 + x3^2 + x4^2)\nx1*x2*x3 + x4^3 + x2^3")?;
    let (names, forms) = (parsed.names, parsed.polys);
    // the threshold may depend on the degree tuple: here it grows with the number of forms
    let threshold = Threshold::parse("r + 1")?;
    let reg = regularize(&forms, &|t| threshold.eval(t), &SolverBudget::with_seed(2))?;

    for g in &reg.generators {
        println!("generator: {}", names.format(g));
    }
    let trace: Vec<String> = reg.trace.iter().map(|t| t.to_string()).collect();
    println!("degree tuples: {}", trace.join(" > "));
    for step in &reg.steps {
        println!("  {step}");
    }
    println!("memberships verified: {}", reg.verify());
    Ok(())
}
