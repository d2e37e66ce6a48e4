//! The eleven acceptance criteria, each printing one pass/fail line.

use std::io::Write;
use std::time::{Duration, Instant};

use birch::cli::{run, Cli, JobSpec};
use birch::fields::{
    choose_expansion_degree, random_nonzero, restriction_of_scalars, solve_diagonal_function_field, solve_diagonal_real,
    DiagonalEquation, ExtElem, ExtField, SolverBudget,
};
use birch::pipeline::{
    birch_orthogonal_blocks, brauer_orthogonal_sequence, normal_form, solve_system, specialize_diagonal, Parameters,
    PipelineConfig, SolutionCertificate, System,
};
use birch::poly::{lift, Monomial, Polynomial, UPoly};
use birch::fields::BirchField;
use birch::scalar::{RatFunc, RealAlg, RealScalar, Scalar, Q};
use birch::strength::{quadratic_strength, regularize, DegreeTuple};
use clap::Parser;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn qi(k: i64) -> Q {
    Q::from_integer(k.into())
}

fn report(n: usize, name: &str, outcome: &Outcome) {
    let (tag, detail) = match outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let mut err = std::io::stderr();
    let _ = writeln!(err, "AC{n:<2} {tag} {name}: {detail}");
}

/// Sum of `c_i x_i^d` plus, inside groups of one to three variables, a few
/// mixed monomials, so that the groups are the variable components.
fn grouped_form(rng: &mut ChaCha8Rng, groups: &[Vec<usize>], n: usize, d: u32) -> Polynomial<RealAlg> {
    let mut f = Polynomial::zero(n);
    for g in groups {
        for &v in g {
            f.add_term(Monomial::var(v, d), RealAlg::rational(random_nonzero(rng, 3)));
        }
        if g.len() >= 2 {
            let mut e = vec![0; n];
            e[g[0]] = d - 2;
            e[g[1]] = 1;
            e[*g.last().unwrap()] += 1;
            f.add_term(Monomial::new(e), RealAlg::rational(random_nonzero(rng, 2)));
        }
    }
    f
}

fn random_groups(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut groups = Vec::new();
    let mut next = 0;
    while next < n {
        let size = rng.gen_range(1..=max).min(n - next);
        groups.push((next..next + size).collect());
        next += size;
    }
    groups
}

fn ac1_orthogonality() -> Outcome {
    let start = Instant::now();
    let (mut brauer, mut blocks) = (0, 0);
    let mut failures = Vec::new();
    for k in 0..200u64 {
        let mut r = rng(k);
        let d = if k % 2 == 0 { 3 } else { 5 };
        let n = r.gen_range(4..=10);
        let budget = SolverBudget::with_seed(k);
        let family = if k % 4 < 2 {
            let groups = random_groups(&mut r, n, 3);
            let f = grouped_form(&mut r, &groups, n, d);
            let count = groups.len().min(4);
            brauer += 1;
            brauer_orthogonal_sequence(&f, count, &budget)
        } else {
            let groups = random_groups(&mut r, n, 2);
            let forms: Vec<_> = (0..r.gen_range(1..=2)).map(|_| grouped_form(&mut r, &groups, n, d)).collect();
            let ell = r.gen_range(1..=2);
            let count = ((groups.len() - 1) / ell).clamp(1, 2);
            blocks += 1;
            birch_orthogonal_blocks(&forms, count, ell, None, &budget).map(|b| b.family)
        };
        match family {
            Ok(f) if f.verify() => {}
            Ok(_) => return Err(format!("instance {k}: certificate does not re-verify")),
            Err(birch::Error::Unsupported(why)) => failures.push(format!("instance {k} (d={d}): {why}")),
            Err(e) => return Err(format!("instance {k}: {e}")),
        }
    }
    let t = start.elapsed();
    // a refusal produces no certificate; only a certificate that fails
    // to re-verify breaks the identity
    let detail = format!(
        "{}/200 families constructed ({brauer} sequences, {blocks} block families), every certificate re-verified exactly in {t:.2?}",
        200 - failures.len()
    );
    let detail = if failures.is_empty() {
        detail
    } else {
        format!("{detail}; refused without a certificate: {}", failures.join("; "))
    };
    if t > Duration::from_secs(60) {
        return Err(format!("{detail}; over 60 s"));
    }
    Ok(detail)
}

fn ac2_specialization() -> Outcome {
    let mut ok = 0;
    let mut total = 0;
    let mut slowest = Duration::ZERO;
    for n in [4usize, 6, 8] {
        for seed in 0..50u64 {
            let mut r = rng(1000 * n as u64 + seed);
            let coeffs: Vec<RealAlg> = (0..n)
                .map(|_| {
                    let num = random_nonzero(&mut r, 9);
                    RealAlg::rational(num / qi(r.gen_range(1..=5)))
                })
                .collect();
            let eq = DiagonalEquation::new(coeffs, 3).unwrap();
            let budget = SolverBudget {
                restarts: 32,
                ..SolverBudget::with_seed(seed)
            };
            let start = Instant::now();
            let res = specialize_diagonal(&eq, None, &budget);
            let t = start.elapsed();
            slowest = slowest.max(t);
            total += 1;
            if let Ok(spec) = res {
                if spec.verify(&eq) && t <= Duration::from_secs(2) {
                    ok += 1;
                }
            }
        }
    }
    let rate = ok as f64 / total as f64;
    let detail = format!("{ok}/{total} exact identities with independent v, w; slowest {slowest:.2?}");
    if rate >= 0.95 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac3_normal_form() -> Outcome {
    let mut dims = Vec::new();
    for seed in 0..6u64 {
        let mut r = rng(300 + seed);
        let n = 12 + (seed as usize % 3);
        let mut text: Vec<String> = (1..=n).map(|i| format!("{}*x{i}^3", random_nonzero(&mut r, 4))).collect();
        // sparse perturbation inside the last few variables
        for _ in 0..2 {
            let a = r.gen_range(n - 3..=n);
            let b = r.gen_range(n - 3..=n);
            let c = r.gen_range(n - 3..=n);
            text.push(format!("{}*x{a}*x{b}*x{c}", random_nonzero(&mut r, 2)));
        }
        let sys = System::parse(&text.join(" + "), BirchField::RealClosed, None).map_err(|e| e.to_string())?;
        let budget = SolverBudget::with_seed(seed);
        let forms: Vec<Polynomial<RealAlg>> = sys.forms.iter().map(lift::<RealAlg>).collect();
        let nf = normal_form(&forms, None, &PipelineConfig::default(), &budget).map_err(|e| format!("seed {seed}: {e}"))?;
        if !nf.verify() || nf.indices.iter().any(|d| d.b.is_zero()) {
            return Err(format!("seed {seed}: restriction does not match the normal form"));
        }
        let cert = solve_system(&sys, BirchField::RealClosed, &PipelineConfig::default(), &budget)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        cert.verify().map_err(|e| format!("seed {seed}: {e}"))?;
        if cert.residuals.iter().any(|r| !r.terms.is_empty()) {
            return Err(format!("seed {seed}: residual not exactly zero"));
        }
        dims.push(n);
    }
    Ok(format!("{} cubics in dimensions {dims:?}: pattern exact, b != 0, residuals exactly zero", dims.len()))
}

fn ac4_leaf_solvers() -> Outcome {
    for seed in 0..100u64 {
        let mut r = rng(400 + seed);
        let d = [3u32, 5, 7][r.gen_range(0..3)];
        let n = r.gen_range(2..=6);
        let coeffs: Vec<RealAlg> = (0..n).map(|_| RealAlg::rational(random_nonzero(&mut r, 20))).collect();
        let eq = DiagonalEquation::new(coeffs, d).unwrap();
        let x = solve_diagonal_real(&eq).map_err(|e| format!("real instance {seed}: {e}"))?;
        let zero = eq.evaluate(&x).is_zero_exact() == Some(true);
        if !zero || x.iter().all(|v| v.is_zero()) {
            return Err(format!("real instance {seed}: not a nonzero zero"));
        }
    }
    let tol = Q::new(1.into(), 1_000_000_000.into());
    let mut certified = 0;
    for seed in 0..50u64 {
        let mut r = rng(450 + seed);
        let coeffs: Vec<RatFunc> = (0..4)
            .map(|_| loop {
                let mut p = Polynomial::zero(1);
                for e in 0..=2u32 {
                    p.add_term(Monomial::var(0, e), qi(r.gen_range(-3..=3)));
                }
                if !p.is_zero() {
                    break RatFunc::from_poly(p);
                }
            })
            .collect();
        let eq = DiagonalEquation::new(coeffs, 3).unwrap();
        if let Ok(sol) = solve_diagonal_function_field(&eq, &SolverBudget::with_seed(seed)) {
            if sol.exact.is_some() || sol.is_certified(&tol) {
                certified += 1;
            }
        }
    }
    let detail = format!("R: 100/100 exact; R(t1): {certified}/50 certified at 1e-9");
    if certified * 10 >= 50 * 9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn ac5_tsen_counting() -> Outcome {
    let mut cases = 0;
    for n in 1..=30u128 {
        for r in 0..=5u128 {
            for d in [3u128, 5] {
                for p in [1u128, 2] {
                    let got = choose_expansion_degree(n as usize, r as usize, d as u32, p as usize);
                    let holds = |s: u128| n * binom(s + p, p) > binom(r + d * s + p, p);
                    if n <= d.pow(p as u32) {
                        if got.is_ok() {
                            return Err(format!("n={n} r={r} d={d} p={p}: expected refusal"));
                        }
                        continue;
                    }
                    let s = got.map_err(|e| e.to_string())? as u128;
                    if !holds(s) || (0..s).any(holds) {
                        return Err(format!("n={n} r={r} d={d} p={p}: s={s} not minimal"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} admissible grid points minimal, the rest refused"))
}

fn ac6_well_order() -> Outcome {
    let mut tuples = vec![DegreeTuple::new(vec![])];
    for len in 1..=3 {
        let mut idx = vec![1u32; len];
        loop {
            if idx.windows(2).all(|w| w[0] >= w[1]) {
                tuples.push(DegreeTuple::new(idx.clone()));
            }
            let mut k = 0;
            while k < len && idx[k] == 5 {
                idx[k] = 1;
                k += 1;
            }
            if k == len {
                break;
            }
            idx[k] += 1;
        }
    }
    for a in &tuples {
        for b in &tuples {
            let count = [a < b, a == b, b < a].iter().filter(|&&x| x).count();
            if count != 1 {
                return Err(format!("trichotomy fails for {a} and {b}"));
            }
            for c in &tuples {
                if a < b && b < c && !(a < c) {
                    return Err(format!("transitivity fails for {a}, {b}, {c}"));
                }
            }
        }
    }
    if !(DegreeTuple::new(vec![3, 3, 1]) < DegreeTuple::new(vec![5, 3])) {
        return Err("(3,3,1) < (5,3) fails".into());
    }
    Ok(format!("{} tuples: trichotomy and transitivity hold; (3,3,1) < (5,3)", tuples.len()))
}

fn random_poly(r: &mut ChaCha8Rng, n: usize, d: u32, terms: usize) -> Polynomial<Q> {
    let mut p = Polynomial::zero(n);
    while p.len() < terms {
        let mut e = vec![0u32; n];
        for _ in 0..d {
            e[r.gen_range(0..n)] += 1;
        }
        p.add_term(Monomial::new(e), random_nonzero(r, 3));
    }
    p
}

fn ac7_regularization() -> Outcome {
    let mut runs = 0;
    for seed in 0..8u64 {
        let mut r = rng(700 + seed);
        let n = 4;
        let f1 = random_poly(&mut r, n, 1, 2).mul(&random_poly(&mut r, n, 2, 3));
        let inputs = match seed % 4 {
            0 => vec![f1],
            1 => vec![f1.add(&random_poly(&mut r, n, 1, 2).mul(&random_poly(&mut r, n, 2, 2)))],
            2 => vec![random_poly(&mut r, n, 3, 2).mul(&random_poly(&mut r, n, 2, 2))],
            _ => vec![f1, random_poly(&mut r, n, 1, 1).mul(&random_poly(&mut r, n, 4, 3))],
        };
        let res = regularize(&inputs, &|_| 3, &SolverBudget::with_seed(seed)).map_err(|e| format!("seed {seed}: {e}"))?;
        if !res.trace.windows(2).all(|w| w[1] < w[0]) {
            return Err(format!("seed {seed}: trace does not decrease"));
        }
        if res.generators.iter().any(|g| g.degree().is_some_and(|d| d % 2 == 0)) {
            return Err(format!("seed {seed}: even degree generator"));
        }
        if !res.memberships.iter().all(|m| m.verify(&res.generators)) || !res.verify() {
            return Err(format!("seed {seed}: membership certificate fails"));
        }
        if res.trace.len() < 2 {
            return Err(format!("seed {seed}: no replacement fired on a low-strength input"));
        }
        runs += 1;
    }
    Ok(format!("{runs} runs terminated with strictly decreasing traces, odd generators, verified memberships"))
}

/// Small exact rationals for the exhaustive quadratic check.
#[derive(Clone, Debug, PartialEq)]
struct Small(Ratio<i64>);

impl std::fmt::Display for Small {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Small {
    fn zero() -> Self {
        Small(Ratio::from_integer(0))
    }
    fn one() -> Self {
        Small(Ratio::from_integer(1))
    }
    fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        Small(self.0 + rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Small(self.0 - rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Small(self.0 * rhs.0)
    }
    fn neg(&self) -> Self {
        Small(-self.0)
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Small(self.0.recip()))
    }
    fn from_rational(v: &Q) -> Self {
        let n: i64 = v.numer().try_into().expect("small");
        let d: i64 = v.denom().try_into().expect("small");
        Small(Ratio::new(n, d))
    }
    fn as_rational(&self) -> Option<Q> {
        Some(Q::new((*self.0.numer()).into(), (*self.0.denom()).into()))
    }
    fn enclosure(&self) -> Option<birch::scalar::Interval> {
        self.as_rational().map(birch::scalar::Interval::point)
    }
}

/// Independent oracle: strength 0 for zero, 1 when the quadric splits
/// into two linear factors over C (completing the square: the
/// discriminant must be a square of a linear form), else 2, which is the
/// most four variables allow.
fn strength_oracle(c: &[[i64; 4]; 4], n: usize) -> usize {
    // c[i][j] for i <= j: coefficient of x_i x_j
    if (0..n).all(|i| (i..n).all(|j| c[i][j] == 0)) {
        return 0;
    }
    // find a direction with q(v) != 0 and move it to x_0
    let q = |v: &[i64; 4]| -> i64 { (0..n).map(|i| (i..n).map(|j| c[i][j] * v[i] * v[j]).sum::<i64>()).sum() };
    let mut basis = [[0i64; 4]; 4];
    let mut pivot = None;
    'search: for i in 0..n {
        for j in 0..n {
            let mut v = [0i64; 4];
            v[i] += 1;
            if j != i {
                v[j] += 1;
            }
            if q(&v) != 0 {
                pivot = Some((i, v));
                break 'search;
            }
        }
    }
    let (i0, v) = pivot.expect("nonzero quadric has a nonzero value");
    basis[0] = v;
    let mut k = 1;
    for i in 0..n {
        if i != i0 {
            basis[k][i] = 1;
            k += 1;
        }
    }
    // coefficients in the new basis y: q(sum y_k basis_k) via the bilinear form
    let b = |u: &[i64; 4], w: &[i64; 4]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in i..n {
                s += c[i][j] * (u[i] * w[j] + u[j] * w[i]);
            }
        }
        s
    };
    let a = q(&basis[0]);
    // q = a y0^2 + y0 * sum_k B_k y_k + C(y'), with B_k = b(e0, e_k)
    let bk: Vec<i64> = (1..n).map(|k| b(&basis[0], &basis[k])).collect();
    let ckl = |k: usize, l: usize| -> i64 {
        if k == l {
            q(&basis[k])
        } else {
            b(&basis[k], &basis[l])
        }
    };
    // discriminant D = B^2 - 4 a C as a quadratic form in y_1..; entries d_kl for k <= l
    let m = n - 1;
    let mut dmat = vec![vec![0i64; m]; m];
    for k in 0..m {
        for l in k..m {
            let bb = if k == l { bk[k] * bk[k] } else { 2 * bk[k] * bk[l] };
            dmat[k][l] = bb - 4 * a * ckl(k + 1, l + 1);
        }
    }
    // over C, D is the square of a linear form iff its symmetric matrix
    // (doubled to stay integral) has every 2x2 minor zero
    let sym = |k: usize, l: usize| -> i64 {
        if k == l {
            2 * dmat[k][k]
        } else {
            dmat[k.min(l)][k.max(l)]
        }
    };
    let square = (0..m).all(|i| {
        (0..m).all(|j| (0..m).all(|k| (0..m).all(|l| sym(i, k) * sym(j, l) == sym(i, l) * sym(j, k))))
    });
    if square {
        1
    } else {
        2
    }
}

fn ac8_quadratic_strength() -> Outcome {
    let mut checked = 0u64;
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i..4).map(move |j| (i, j))).collect();
    for n in 1..=4usize {
        let slots: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(i, j)| i < n && j < n).collect();
        let total = 5u64.pow(slots.len() as u32);
        let names: Vec<Monomial> = slots
            .iter()
            .map(|&(i, j)| {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                Monomial::new(e)
            })
            .collect();
        for code in 0..total {
            let mut c = [[0i64; 4]; 4];
            let mut x = code;
            let mut p: Polynomial<Small> = Polynomial::zero(n);
            for (s, &(i, j)) in slots.iter().enumerate() {
                let v = (x % 5) as i64 - 2;
                x /= 5;
                c[i][j] = v;
                if v != 0 {
                    p.add_term(names[s].clone(), Small(Ratio::from_integer(v)));
                }
            }
            // only forms that use all n variables count as forms in n variables
            if n > 1 && (0..n).any(|i| (0..n).all(|j| c[i.min(j)][i.max(j)] == 0)) {
                continue;
            }
            let got = quadratic_strength(&p).map_err(|e| e.to_string())?;
            let want = strength_oracle(&c, n);
            if got != want {
                return Err(format!("{p}: oracle {want}, quadratic_strength {got}"));
            }
            checked += 1;
        }
    }
    // x^2 + y^2 = (x + iy)(x - iy): absolute strength 1
    let mut q: Polynomial<Small> = Polynomial::zero(2);
    q.add_term(Monomial::var(0, 2), Small::one());
    q.add_term(Monomial::var(1, 2), Small::one());
    if quadratic_strength(&q).ok() != Some(1) {
        return Err("x^2 + y^2 should have absolute strength 1".into());
    }
    Ok(format!("{checked} quadratics agree with the factorization oracle; x^2 + y^2 has strength 1"))
}

fn ac9_restriction() -> Outcome {
    let fields = [
        ("Q(i)", UPoly::from_ints(&[1, 0, 1])),
        ("Q(cbrt 2)", UPoly::from_ints(&[-2, 0, 0, 1])),
    ];
    let mut runs = 0;
    for (name, minpoly) in fields {
        let k = ExtField::new(minpoly).map_err(|e| e.to_string())?;
        let e = k.degree();
        for seed in 0..5u64 {
            let mut r = rng(900 + seed);
            let n = 3;
            let elem = |r: &mut ChaCha8Rng| -> ExtElem {
                let coords: Vec<Q> = (0..e).map(|_| qi(r.gen_range(-2..=2))).collect();
                k.element(&coords)
            };
            let mut f: Polynomial<ExtElem> = Polynomial::zero(n);
            for _ in 0..4 {
                let mut ex = vec![0u32; n];
                for _ in 0..3 {
                    ex[r.gen_range(0..n)] += 1;
                }
                f.add_term(Monomial::new(ex), elem(&mut r));
            }
            let sys = restriction_of_scalars(&k, &f).map_err(|e| e.to_string())?;
            // identity: sum_j a^j f_j(y) = f(sum_j a^j y_j) at random rational y
            let y: Vec<Q> = (0..n * e).map(|_| qi(r.gen_range(-3..=3))).collect();
            let x = sys.lift_point(&y);
            let lhs = f.evaluate(&x).map_err(|e| e.to_string())?;
            let mut rhs = ExtElem::zero();
            for (j, fj) in sys.forms.iter().enumerate() {
                let v = fj.evaluate(&y).map_err(|e| e.to_string())?;
                rhs = rhs.add(&k.generator().pow(j as u32).mul(&ExtElem::from_rational(&v)));
            }
            if !lhs.sub(&rhs).is_zero() {
                return Err(format!("{name}, seed {seed}: restriction identity fails"));
            }
            // a planted zero: subtract f(x0) x_1^3 / x0_1^3
            let y0: Vec<Q> = (0..n * e).map(|t| if t < e { qi(1) } else { qi(r.gen_range(-2..=2)) }).collect();
            let x0 = sys.lift_point(&y0);
            let shift = f.evaluate(&x0).unwrap().div(&x0[0].pow(3)).ok_or("zero first coordinate")?;
            let mut g = f.clone();
            g.add_term(Monomial::var(0, 3), shift.neg());
            let gsys = restriction_of_scalars(&k, &g).map_err(|e| e.to_string())?;
            if !gsys.forms.iter().all(|fj| fj.evaluate(&y0).is_ok_and(|v| v.is_zero())) {
                return Err(format!("{name}, seed {seed}: planted rational zero missed"));
            }
            let lifted = gsys.lift_point(&y0);
            if !g.evaluate(&lifted).is_ok_and(|v| v.is_zero()) || lifted.iter().all(|v| v.is_zero()) {
                return Err(format!("{name}, seed {seed}: lifted point is not a nonzero zero"));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} cubic forms over Q(i) and Q(cbrt 2): identity exact, rational zeros lift to zeros"))
}

fn ac10_sampler() -> Outcome {
    let text = "x1^3 + 2*x2^3 - x3^3 + x4^3 - 3*x5^3 + x6^3 + x7^3 - x8^3 + x8*x9^2 + x9^3 + x10^3";
    let sys = System::parse(text, BirchField::RealClosed, None).map_err(|e| e.to_string())?;
    let forms: Vec<Polynomial<RealAlg>> = sys.forms.iter().map(lift::<RealAlg>).collect();
    let budget = SolverBudget::with_seed(10);
    let nf = normal_form(&forms, None, &PipelineConfig::default(), &budget).map_err(|e| e.to_string())?;
    let pts = nf.sample(100, 10).map_err(|e| e.to_string())?;
    for (k, (_, x)) in pts.iter().enumerate() {
        if !nf.on_variety(x) {
            return Err(format!("sample {k} has a nonzero residual"));
        }
    }
    let approx: Vec<Vec<f64>> = pts.iter().map(|(_, x)| x.iter().map(|v| v.approx()).collect()).collect();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let close = approx[a].iter().zip(&approx[b]).all(|(u, v)| (u - v).abs() < 1e-9);
            if close && pts[a].1.iter().zip(&pts[b].1).all(|(u, v)| u.sub(v).is_zero_exact() == Some(true)) {
                return Err(format!("samples {a} and {b} coincide"));
            }
        }
    }
    let mut r = rng(1010);
    let want = nf.parameter_count();
    for k in 0..5 {
        let p = Parameters {
            y: (0..nf.r()).map(|_| RealAlg::rational(random_nonzero(&mut r, 3) / qi(r.gen_range(1..=4)))).collect(),
            z: (0..nf.r()).map(|_| RealAlg::rational(qi(r.gen_range(-3..=3)) / qi(r.gen_range(1..=4)))).collect(),
            w: (0..nf.residual_dim()).map(|_| RealAlg::rational(qi(r.gen_range(-3..=3)) / qi(r.gen_range(1..=4)))).collect(),
        };
        if nf.jacobian_rank(&p) != Some(want) {
            return Err(format!("parameter {k}: Jacobian rank below {want}"));
        }
        if !nf.jacobian_matches_differences(&p, 1e-6) {
            return Err(format!("parameter {k}: symbolic Jacobian disagrees with finite differences"));
        }
    }
    Ok(format!("100 distinct exact points; Jacobian rank {want} = 2r + dim W at 5 parameters, finite differences agree"))
}

fn ac11_affine() -> Outcome {
    for seed in 0..20u64 {
        let mut r = rng(1100 + seed);
        let n = 4 + (seed as usize % 3);
        let terms: Vec<String> = (1..=n)
            .map(|i| format!("{}/{}*x{i}^3", random_nonzero(&mut r, 9), r.gen_range(1..=4)))
            .collect();
        let eq = format!("{} = 1", terms.join(" + "));
        let args = ["birch", "solve", "--affine", "--field", "R", "--format", "json", "--seed", &seed.to_string(), "--", &eq];
        let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
        let job = JobSpec::from_cli(&cli).map_err(|e| e.to_string())?;
        let out = run(&job);
        if out.code != 0 {
            return Err(format!("seed {seed}: exit {} ({})", out.code, out.report.trim()));
        }
        let cert = SolutionCertificate::from_json(&out.report).map_err(|e| e.to_string())?;
        cert.verify().map_err(|e| format!("seed {seed}: {e}"))?;
        if cert.residuals.iter().any(|r| !r.terms.is_empty()) {
            return Err(format!("seed {seed}: residual not exactly zero"));
        }
        // the affine equation itself, independently of the certificate code
        let x = cert.exact_point().map_err(|e| e.to_string())?;
        let sys = System::parse(&eq, BirchField::RealClosed, None).map_err(|e| e.to_string())?;
        let vals: Vec<RealAlg> = x.iter().map(|c| c.coeff(&Monomial::new(vec![]))).collect();
        let f = lift::<RealAlg>(&sys.forms[0]);
        if f.evaluate(&vals).map_err(|e| e.to_string())?.is_zero_exact() != Some(true) {
            return Err(format!("seed {seed}: point misses the affine equation"));
        }
    }
    Ok("20/20 affine diagonal cubics solved with exactly zero residual".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        (1, "orthogonality identity", ac1_orthogonality),
        (2, "diagonal specialization", ac2_specialization),
        (3, "normal form", ac3_normal_form),
        (4, "leaf solvers", ac4_leaf_solvers),
        (5, "Tsen counting", ac5_tsen_counting),
        (6, "degree-tuple well-order", ac6_well_order),
        (7, "regularization", ac7_regularization),
        (8, "quadratic strength", ac8_quadratic_strength),
        (9, "restriction of scalars", ac9_restriction),
        (10, "density sampler", ac10_sampler),
        (11, "affine path", ac11_affine),
    ];
    let mut failed = Vec::new();
    for (n, name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let outcome = outcome.map(|d| format!("{d} [{:.1?}]", start.elapsed()));
        report(n, name, &outcome);
        if outcome.is_err() {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
