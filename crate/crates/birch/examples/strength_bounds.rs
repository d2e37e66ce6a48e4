//! Strength of quadrics exactly, and certified bounds for cubics.
//!
//! Run with `cargo run --example strength_bounds`.

use birch::fields::SolverBudget;
use birch::poly::parse_polynomial;
use birch::strength::{collective_strength_bounds, quadratic_strength};

fn main() -> birch::Result<()> {
    // x^2 + y^2 = (x + iy)(x - iy) has strength 1 over C
    for q in ["x^2 + y^2", "x1*x2 + x3*x4", "x1^2 + x2^2 + x3^2 + x4^2 + x5^2"] {
        let (p, _) = parse_polynomial(q, None)?;
        println!("strength({q}) = {}", quadratic_strength(&p)?);
    }

    let budget = SolverBudget::with_seed(0);
    for cubic in ["x1*(x2^2 + x3^2) + x4*(x5^2 - x6^2)", "x1^3 + x2^3 + x3^3 + x4^3"] {
        let (p, names) = parse_polynomial(cubic, None)?;
        let b = collective_strength_bounds(&[p], &budget)?;
        let lower = b.lower.as_ref().map_or("none".into(), |l| l.to_string());
        println!("{cubic}: strength in [{lower}, {}]", b.upper.map_or("inf".into(), |u| u.to_string()));
        println!("  lower: {}", b.lower_provenance);
        println!("  upper: {}", b.upper_provenance);
        if let Some((_, cert)) = b.classes.first().and_then(|c| c.witness.as_ref()) {
            let pairs: Vec<String> =
                cert.pairs.iter().map(|(g, h)| format!("({})*({})", names.format(g), names.format(h))).collect();
            println!("  decomposition: {}", pairs.join(" + "));
        }
    }
    Ok(())
}
