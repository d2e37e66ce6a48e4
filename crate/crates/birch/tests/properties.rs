//! Invariants checked on random inputs.

use birch::fields::{choose_expansion_degree, BirchField, SolverBudget};
use birch::pipeline::{diagonal_solve, SolutionCertificate, System};
use birch::poly::{parse_polynomial, Monomial, Polynomial, VarNames};
use birch::scalar::{Scalar, Q};
use birch::strength::{quadratic_strength, DegreeTuple};
use proptest::prelude::*;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// A polynomial in `n` variables from (exponents, coefficient) pairs.
fn poly(n: usize, terms: &[(Vec<u32>, i64)]) -> Polynomial<Q> {
    let mut p = Polynomial::zero(n);
    for (e, c) in terms {
        p.add_term(Monomial::new(e.clone()), q(*c));
    }
    p
}

fn arb_poly(n: usize, max_deg: u32) -> impl Strategy<Value = Polynomial<Q>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -5i64..=5), 0..6).prop_map(move |t| poly(n, &t))
}

fn arb_quadric(n: usize) -> impl Strategy<Value = Polynomial<Q>> {
    prop::collection::vec(-3i64..=3, n * (n + 1) / 2).prop_map(move |cs| {
        let mut terms = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                terms.push((e, cs[k]));
                k += 1;
            }
        }
        poly(n, &terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_tuples_are_totally_ordered(
        a in prop::collection::vec(1u32..=7, 0..4),
        b in prop::collection::vec(1u32..=7, 0..4),
        c in prop::collection::vec(1u32..=7, 0..4),
    ) {
        let (a, b, c) = (DegreeTuple::new(a), DegreeTuple::new(b), DegreeTuple::new(c));
        prop_assert_eq!([a < b, a == b, b < a].iter().filter(|&&x| x).count(), 1);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn degree_tuples_ignore_entry_order(mut v in prop::collection::vec(1u32..=7, 0..5)) {
        let a = DegreeTuple::new(v.clone());
        v.reverse();
        prop_assert_eq!(a, DegreeTuple::new(v));
    }

    #[test]
    fn quadratic_strength_is_invariant_under_invertible_substitutions(
        f in arb_quadric(4),
        upper in prop::collection::vec(-2i64..=2, 6),
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        // unit upper triangular matrix with permuted columns is invertible
        let mut cols = vec![vec![Q::zero(); 4]; 4];
        let mut k = 0;
        for j in 0..4 {
            cols[perm[j]][j] = Q::one();
            for i in 0..j {
                cols[perm[j]][i] = q(upper[k]);
                k += 1;
            }
        }
        let g = f.substitute_linear(&cols).unwrap();
        prop_assert_eq!(quadratic_strength(&f).unwrap(), quadratic_strength(&g).unwrap());
    }

    #[test]
    fn quadratic_strength_is_half_the_rank_rounded_up(f in arb_quadric(3)) {
        // Gram matrix rank over Q by 2x2 and 3x3 minors
        let c = |i: usize, j: usize| -> Q {
            let mut e = vec![0; 3];
            e[i] += 1;
            e[j] += 1;
            let v = f.coeff(&Monomial::new(e));
            if i == j { v.clone() + v } else { v }
        };
        let m: Vec<Vec<Q>> = (0..3).map(|i| (0..3).map(|j| c(i, j)).collect()).collect();
        let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
        let minor = |a: usize, b: usize, x: usize, y: usize| &m[a][x] * &m[b][y] - &m[a][y] * &m[b][x];
        let rank: usize = if !det.is_zero() {
            3
        } else if (0..3).any(|a| (a + 1..3).any(|b| (0..3).any(|x| (x + 1..3).any(|y| !minor(a, b, x, y).is_zero())))) {
            2
        } else if m.iter().flatten().any(|v| !v.is_zero()) {
            1
        } else {
            0
        };
        prop_assert_eq!(quadratic_strength(&f).unwrap(), rank.div_ceil(2));
    }

    #[test]
    fn formatting_then_parsing_is_the_identity(f in arb_poly(3, 3)) {
        let names = VarNames::new(vec!["x".into(), "y".into(), "z".into()]);
        let text = names.format(&f);
        let (g, _) = parse_polynomial(&text, Some(&names)).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn evaluation_is_a_ring_map(
        f in arb_poly(2, 3),
        g in arb_poly(2, 3),
        h in arb_poly(2, 3),
        x in -4i64..=4,
        y in -4i64..=4,
    ) {
        let pt = [q(x), q(y)];
        let ev = |p: &Polynomial<Q>| p.evaluate(&pt).unwrap();
        prop_assert_eq!(ev(&f.add(&g).mul(&h)), ev(&f.mul(&h)).add(&ev(&g.mul(&h))));
        prop_assert_eq!(ev(&f.mul(&g)), ev(&f).mul(&ev(&g)));
    }

    #[test]
    fn expansion_degree_satisfies_its_inequality(n in 1usize..=40, r in 0usize..=6, p in 1usize..=2) {
        let binom = |n: u128, k: u128| (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1));
        match choose_expansion_degree(n, r, 3, p) {
            Ok(s) => {
                let (n, r, s, p) = (n as u128, r as u128, s as u128, p as u128);
                prop_assert!(n * binom(s + p, p) > binom(r + 3 * s + p, p));
            }
            Err(_) => prop_assert!(n <= 3usize.pow(p as u32)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn real_certificates_reverify_after_a_json_round_trip(
        cs in prop::collection::vec((1i64..=9).prop_flat_map(|c| prop_oneof![Just(c), Just(-c)]), 2..5),
        seed in 0u64..1000,
    ) {
        let text: Vec<String> = cs.iter().enumerate().map(|(i, c)| format!("{c}*x{}^3", i + 1)).collect();
        let sys = System::parse(&text.join(" + "), BirchField::RealClosed, None).unwrap();
        let cert = diagonal_solve(&sys, BirchField::RealClosed, &SolverBudget::with_seed(seed)).unwrap();
        cert.verify().unwrap();
        let back = SolutionCertificate::from_json(&cert.to_json()).unwrap();
        back.verify().unwrap();
        prop_assert_eq!(back.hash, cert.hash);
        prop_assert!(back.residuals.iter().all(|r| r.terms.is_empty()));
    }
}
