//! A cubic over Q(i) becomes a pair of cubics over Q; a rational zero of
//! the pair gives a zero of the original form.
//!
//! Run with `cargo run --example restriction_of_scalars`.

use birch::fields::{restriction_of_scalars, ExtElem, ExtField};
use birch::poly::{Monomial, Polynomial, UPoly, VarNames};
use birch::scalar::{Scalar, Q};

fn main() -> birch::Result<()> {
    let k = ExtField::new(UPoly::from_ints(&[1, 0, 1]))?;
    let i = k.generator();
    let q = |n: i64| ExtElem::from_rational(&Q::from_integer(n.into()));

    // f = x^3 + i y^3 - (1 + i) z^3, which vanishes at (1, 1, 1)
    let mut f: Polynomial<ExtElem> = Polynomial::zero(3);
    f.add_term(Monomial::var(0, 3), q(1));
    f.add_term(Monomial::var(1, 3), i.clone());
    f.add_term(Monomial::var(2, 3), q(-1).sub(&i));

    let sys = restriction_of_scalars(&k, &f)?;
    let names = VarNames::new(["x0", "x1", "y0", "y1", "z0", "z1"].iter().map(|s| s.to_string()).collect());
    for (j, fj) in sys.forms.iter().enumerate() {
        println!("f{j} = {}", names.format(fj));
    }

    let y = [1, 0, 1, 0, 1, 0].map(|n| Q::from_integer(n.into()));
    let on_all = sys.forms.iter().all(|fj| fj.evaluate(&y).is_ok_and(|v| v.is_zero()));
    let x = sys.lift_point(&y);
    println!("restricted zero: {on_all}; f at the lifted point is zero: {}", f.evaluate(&x)?.is_zero());
    Ok(())
}
