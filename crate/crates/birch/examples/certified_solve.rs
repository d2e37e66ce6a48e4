//! Solving a cubic system end to end and checking the certificate, then
//! showing that a tampered certificate is refused.
//!
//! Run with `cargo run --example certified_solve`.

use birch::fields::{BirchField, SolverBudget};
use birch::pipeline::{solve_system, PipelineConfig, SolutionCertificate, System};

fn main() -> birch::Result<()> {
    let text = "x1^3 - 2*x2^3 + x3^3 + x4^3 - x5^3 + 3*x6^3 + x7^3 + x8^3 + x1*x2*x8";
    let sys = System::parse(text, BirchField::RealClosed, Some("x8"))?;
    let cert = solve_system(&sys, BirchField::RealClosed, &PipelineConfig::default(), &SolverBudget::with_seed(4))?;
    print!("{}", cert.to_text());

    // the JSON form is what `birch verify` reads back
    let json = cert.to_json();
    SolutionCertificate::from_json(&json)?.verify()?;
    println!("round trip through JSON verified");

    // swapping two coordinates breaks the equation
    let mut forged = SolutionCertificate::from_json(&json)?;
    forged.point.swap(5, 6);
    match forged.verify() {
        Ok(()) => println!("forged certificate accepted (unexpected)"),
        Err(e) => println!("forged certificate refused: {e}"),
    }
    Ok(())
}
