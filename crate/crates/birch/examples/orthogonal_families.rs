//! Orthogonal vectors and orthogonal subspaces for a cubic form: the form
//! restricted to their span has no mixed terms.
//!
//! Run with `cargo run --example orthogonal_families`.

use birch::fields::SolverBudget;
use birch::pipeline::{birch_orthogonal_blocks, brauer_orthogonal_sequence, Members};
use birch::poly::{lift, parse_polynomial, VarNames};
use birch::scalar::RealAlg;

fn main() -> birch::Result<()> {
    let budget = SolverBudget::with_seed(1);
    let (f, names) = parse_polynomial("x1^3 + x1*x2^2 - 2*x2^3 + x3^3 + 3*x4^3 - x4*x5^2 + x5^3 + x6^3", None)?;
    let f = lift::<RealAlg>(&f);
    println!("f = {}", names.format(&f));

    let seq = brauer_orthogonal_sequence(&f, 3, &budget)?;
    if let Members::Vectors(vs) = &seq.members {
        for (j, v) in vs.iter().enumerate() {
            let shown: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            println!("v{} = ({})", j + 1, shown.join(", "));
        }
    }
    let ys = VarNames::new((1..=3).map(|j| format!("y{j}")).collect());
    println!("f(y1 v1 + y2 v2 + y3 v3) = {}", ys.format(&seq.certificate[0]));
    println!("identity re-verified: {}", seq.verify());

    // two orthogonal lines plus a remainder block
    let blocks = birch_orthogonal_blocks(std::slice::from_ref(&f), 2, 1, None, &budget)?;
    println!("blocks re-verified: {} ({})", blocks.family.verify(), blocks.family.provenance.join("; "));
    for (j, s) in blocks.strength.iter().enumerate() {
        if let Some(b) = s {
            let lower = b.lower.as_ref().map_or("none".into(), |l| l.to_string());
            println!("strength of f on V{}: [{lower}, {}]", j + 1, b.upper.map_or("inf".into(), |u| u.to_string()));
        }
    }
    Ok(())
}
