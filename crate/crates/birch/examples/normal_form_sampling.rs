//! The diagonal normal form of a cubic and rational points sampled from
//! its parametrization.
//!
//! Run with `cargo run --example normal_form_sampling`.

use birch::fields::SolverBudget;
use birch::pipeline::{normal_form, PipelineConfig};
use birch::poly::{lift, parse_polynomial};
use birch::scalar::RealAlg;

fn main() -> birch::Result<()> {
    let text = "x1^3 + 2*x2^3 - x3^3 + x4^3 - 3*x5^3 + x6^3 + x7^3 - x8^3 + x8*x9^2 + x9^3 + x10^3";
    let (f, names) = parse_polynomial(text, None)?;
    let nf = normal_form(&[lift::<RealAlg>(&f)], None, &PipelineConfig::default(), &SolverBudget::with_seed(5))?;
    println!("f = {}", names.format(&f));
    for line in &nf.provenance {
        println!("  {line}");
    }
    let idx = &nf.indices[0];
    println!("pattern: x y^2 + a y^3 + b u^3 with a = {}, b = {}", idx.a, idx.b);
    println!("parameters: {} (2r + dim W), normal form verified: {}", nf.parameter_count(), nf.verify());

    for (k, (p, x)) in nf.sample(3, 5)?.iter().enumerate() {
        let shown: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        println!("point {}: ({}) on the variety: {}", k + 1, shown.join(", "), nf.on_variety(x));
        println!("  Jacobian rank {:?}", nf.jacobian_rank(p));
    }
    Ok(())
}
