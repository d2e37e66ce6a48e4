//! Exact sparse multivariate polynomials.

mod gcd;
mod grading;
mod monomial;
mod parse;
mod polynomial;
mod serial;
pub mod univariate;

pub use gcd::{content_in, make_monic, poly_gcd};
pub use grading::BlockGrading;
pub use monomial::Monomial;
pub use parse::{parse_polynomial, parse_system, ParsedSystem, VarNames};
pub use polynomial::Polynomial;
pub use serial::{polynomial_from_json, polynomial_to_json, PolyJson};
pub use univariate::UPoly;

use num_traits::{One, Signed};

use crate::scalar::{Scalar, Q};

/// Canonical text form: terms in decreasing graded-lexicographic order,
/// `*` between factors, `^` for powers. Non-rational coefficients are
/// parenthesised.
pub fn format_polynomial<F: Scalar>(p: &Polynomial<F>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let factors: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        let mono = factors.join("*");
        let (negative, coef) = match c.as_rational() {
            Some(r) => {
                let neg = r.is_negative();
                let a = r.abs();
                let text = if One::is_one(&a) && !mono.is_empty() {
                    String::new()
                } else {
                    a.to_string()
                };
                (neg, text)
            }
            None => (false, format!("({c})")),
        };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&coef);
        if !coef.is_empty() && !mono.is_empty() {
            out.push('*');
        }
        out.push_str(&mono);
    }
    out
}

/// Default variable names `x1..xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Converts a rational polynomial into any scalar kind.
pub fn lift<F: Scalar>(p: &Polynomial<Q>) -> Polynomial<F> {
    p.map_coeffs(F::from_rational)
}

/// `sum c_i x_i^d`.
pub fn diagonal_form<F: Scalar>(coeffs: &[F], d: u32) -> Polynomial<F> {
    let n = coeffs.len();
    let mut p = Polynomial::zero(n);
    for (i, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(i, d), c.clone());
    }
    p
}
