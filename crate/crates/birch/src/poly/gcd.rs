//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences.


use super::{Monomial, Polynomial};
use crate::scalar::Q;

/// Scales to make the leading coefficient 1. Zero stays zero.
pub fn make_monic(p: &Polynomial<Q>) -> Polynomial<Q> {
    match p.leading() {
        Some((_, c)) => p.scale(&c.recip()),
        None => p.clone(),
    }
}

fn main_var(a: &Polynomial<Q>, b: &Polynomial<Q>) -> Option<usize> {
    a.support()
        .into_iter()
        .chain(b.support())
        .max()
}

/// Coefficients of `p` as a polynomial in `var`, indexed by power.
fn coefficients_in(p: &Polynomial<Q>, var: usize) -> Vec<Polynomial<Q>> {
    let deg = p.degree_in(var) as usize;
    let mut out = vec![Polynomial::zero(p.nvars()); deg + 1];
    for (m, c) in p.terms() {
        let e = m.exponent(var) as usize;
        let mut exps = m.dense(p.nvars());
        exps[var] = 0;
        out[e].add_term(Monomial::new(exps), c.clone());
    }
    out
}

/// gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &Polynomial<Q>, var: usize) -> Polynomial<Q> {
    coefficients_in(p, var)
        .iter()
        .fold(Polynomial::zero(p.nvars()), |acc, c| poly_gcd(&acc, c))
}

fn leading_in(p: &Polynomial<Q>, var: usize) -> Polynomial<Q> {
    coefficients_in(p, var).pop().unwrap_or_else(|| Polynomial::zero(p.nvars()))
}

fn pseudo_rem(a: &Polynomial<Q>, b: &Polynomial<Q>, var: usize) -> Polynomial<Q> {
    let db = b.degree_in(var);
    let lb = leading_in(b, var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = leading_in(&r, var);
        let shift = Polynomial::monomial(r.nvars(), Monomial::var(var, dr - db), <Q as num_traits::One>::one());
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
    }
    r
}

fn primitive_in(p: &Polynomial<Q>, var: usize) -> Polynomial<Q> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides")
}

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Polynomial<Q>, b: &Polynomial<Q>) -> Polynomial<Q> {
    if a.is_zero() {
        return make_monic(b);
    }
    if b.is_zero() {
        return make_monic(a);
    }
    let var = match main_var(a, b) {
        Some(v) => v,
        None => return Polynomial::one(a.nvars()),
    };
    let da = a.degree_in(var);
    let db = b.degree_in(var);
    if da == 0 {
        return poly_gcd(a, &content_in(b, var));
    }
    if db == 0 {
        return poly_gcd(&content_in(a, var), b);
    }
    let c = poly_gcd(&content_in(a, var), &content_in(b, var));
    let (mut x, mut y) = (primitive_in(a, var), primitive_in(b, var));
    if x.degree_in(var) < y.degree_in(var) {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let r = pseudo_rem(&x, &y, var);
        x = y;
        y = primitive_in(&r, var);
        if !y.is_zero() && y.degree_in(var) == 0 {
            // coprime in var: only the content part survives
            x = Polynomial::one(a.nvars());
            break;
        }
    }
    make_monic(&c.mul(&primitive_in(&x, var)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::poly::VarNames;

    fn names() -> VarNames {
        VarNames::new(vec!["x".into(), "y".into(), "z".into()])
    }

    fn p(s: &str) -> Polynomial<Q> {
        parse_polynomial(s, Some(&names())).unwrap().0
    }

    #[test]
    fn multivariate_gcds() {
        let g = poly_gcd(&p("(x+y)^2*(x-z)"), &p("(x+y)*(y+z)*(x-z)^2"));
        assert_eq!(g, make_monic(&p("(x+y)*(x-z)")));
        assert_eq!(poly_gcd(&p("2x+2y"), &p("3x+3y")), p("x+y"));
        assert_eq!(poly_gcd(&p("x^2+y^2"), &p("x+y")), p("1"));
        assert_eq!(poly_gcd(&p("x*y*z"), &p("y^2*z")), p("y*z"));
    }
}
