//! End-to-end solving: fast paths, optional regularization, the normal
//! form and back-substitution, with every point certified exactly.

use crate::error::{Error, Result};
use crate::fields::{solve_diagonal, split_parameters, BaseScalar, BirchField, DiagonalSolution, SolverBudget};
use crate::poly::{parse_polynomial, parse_system, Monomial, Polynomial, VarNames};
use crate::scalar::{RealAlg, Scalar, Q};
use crate::strength::regularize;

use super::certificate::{CertScalar, CertificateInput, SolutionCertificate};
use super::leaf::{diagonal_coeffs, solve_single};
use super::normal::{normal_form, NormalFormData, Parameters};
use super::PipelineConfig;

/// Parsed input: forms over the variables followed by the parameters of
/// the field, plus an optional polynomial to avoid.
#[derive(Clone, Debug)]
pub struct System {
    pub names: VarNames,
    pub params: usize,
    pub forms: Vec<Polynomial<Q>>,
    pub avoid: Option<Polynomial<Q>>,
}

fn param_names(field: BirchField) -> Vec<String> {
    match field {
        BirchField::RealFunctionField { p } => (1..=p).map(|j| format!("t{j}")).collect(),
        _ => Vec::new(),
    }
}

impl System {
    /// Parses a system and an avoided polynomial. Over `R(t1..tp)` the
    /// names `t1..tp` are parameters and come last.
    pub fn parse(text: &str, field: BirchField, avoid: Option<&str>) -> Result<System> {
        let parsed = parse_system(text)?;
        if parsed.polys.is_empty() {
            return Err(Error::contract("no equations given"));
        }
        let params = param_names(field);
        let mut vars: Vec<String> = parsed
            .names
            .names()
            .iter()
            .filter(|v| !params.contains(v))
            .cloned()
            .collect();
        if let Some(g) = avoid {
            let (_, extra) = parse_polynomial(g, None)?;
            for v in extra.names() {
                if !vars.contains(v) && !params.contains(v) {
                    return Err(Error::contract(format!("avoided polynomial uses `{v}`, which no equation mentions")));
                }
            }
        }
        let p = params.len();
        vars.extend(params);
        let names = VarNames::new(vars);
        let map: Vec<usize> = parsed.names.names().iter().map(|v| names.index(v).expect("present")).collect();
        let forms = parsed.polys.iter().map(|f| f.remap(&map, names.len())).collect();
        let avoid = avoid.map(|g| parse_polynomial(g, Some(&names)).map(|(g, _)| g)).transpose()?;
        Ok(System {
            names,
            params: p,
            forms,
            avoid,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len() - self.params
    }

    fn var_indices(&self) -> Vec<usize> {
        (0..self.nvars()).collect()
    }

    /// Homogeneous of odd degree in the variables, forms by form.
    pub fn check_homogeneous(&self) -> Result<Vec<u32>> {
        let vars = self.var_indices();
        self.forms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let degs: Vec<u32> = f.terms().map(|(m, _)| m.degree_in(&vars)).collect();
                let d = *degs.first().ok_or_else(|| Error::contract(format!("equation {} is zero", i + 1)))?;
                if degs.iter().any(|&e| e != d) {
                    return Err(Error::contract(format!(
                        "equation {} is not homogeneous; pass --affine to homogenize it",
                        i + 1
                    )));
                }
                if d % 2 == 0 {
                    return Err(Error::contract(format!(
                        "equation {} has even degree {d}; only odd degrees have points over every Birch field",
                        i + 1
                    )));
                }
                Ok(d)
            })
            .collect()
    }

    fn lifted<F: Scalar>(&self) -> Result<Vec<Polynomial<F>>> {
        if self.params > 0 {
            return Err(Error::contract("constant coefficients expected"));
        }
        Ok(self.forms.iter().map(crate::poly::lift::<F>).collect())
    }

    fn certificate_input(&self, field: BirchField, budget: &SolverBudget, stage: &str, provenance: Vec<String>) -> CertificateInput<'_> {
        CertificateInput {
            field,
            names: &self.names,
            parameters: self.params,
            equations: &self.forms,
            avoid: self.avoid.as_ref(),
            tolerance: budget.residual_tol.clone(),
            stage: stage.into(),
            provenance,
        }
    }
}

fn constants<F: CertScalar>(x: Vec<F>, p: usize) -> Vec<Polynomial<F>> {
    let mut x = x;
    F::unify(&mut x);
    x.into_iter().map(|c| Polynomial::constant(p, c)).collect()
}

/// A nonzero point of a system of odd degree forms, certified.
///
/// A single diagonal form goes to the field's diagonal oracle. Otherwise the
/// forms are optionally regularized (the generators cut out a subvariety of
/// the zero set), brought to the normal form, and each `x_i` is solved for
/// with `y_i = 1`, `z_i = 0`, `w = 0`; other small parameters are tried when
/// the avoided polynomial vanishes there.
pub fn solve_system(
    sys: &System,
    field: BirchField,
    config: &PipelineConfig,
    budget: &SolverBudget,
) -> Result<SolutionCertificate> {
    budget.validate()?;
    sys.check_homogeneous()?;
    match field {
        BirchField::Rationals => solve_exact::<Q>(sys, config, budget),
        BirchField::RealClosed => solve_exact::<RealAlg>(sys, config, budget),
        BirchField::RealFunctionField { .. } => solve_function_field(sys, field, budget),
    }
}

fn solve_exact<F: BaseScalar + CertScalar>(
    sys: &System,
    config: &PipelineConfig,
    budget: &SolverBudget,
) -> Result<SolutionCertificate> {
    let field = F::field();
    let forms: Vec<Polynomial<F>> = sys.lifted()?;
    let avoid: Option<Polynomial<F>> = sys.avoid.as_ref().map(crate::poly::lift::<F>);
    let admissible = |x: &[F]| match &avoid {
        Some(g) => g.evaluate(x).is_ok_and(|v| v.is_zero_exact() == Some(false)),
        None => true,
    };
    if forms.len() == 1 && diagonal_coeffs(&forms[0]).is_some() {
        let mut rng = budget.rng(0xd1a9);
        let x = solve_single(&forms[0], &admissible, &mut rng, budget)?;
        let cert = sys.certificate_input(field, budget, "diagonal oracle", vec!["single diagonal form".into()]);
        return SolutionCertificate::build(&cert, &constants(x, 0));
    }
    let mut provenance = Vec::new();
    let solved: Vec<Polynomial<F>> = match &config.regularize_threshold {
        Some(t) => {
            let reg = regularize(&sys.forms, &|tuple| t.eval(tuple), budget)?;
            provenance.extend(reg.steps.iter().cloned());
            provenance.push(format!("regularized to degrees {:?}", reg.trace.last().map(|d| d.entries().to_vec())));
            reg.generators.iter().map(crate::poly::lift::<F>).collect()
        }
        None => forms.clone(),
    };
    let solved: Vec<Polynomial<F>> = solved.into_iter().filter(|g| !g.is_zero()).collect();
    if solved.is_empty() {
        return Err(Error::contract("every equation is zero"));
    }
    let nf = normal_form(&solved, avoid.as_ref(), config, budget)?;
    provenance.extend(nf.provenance.iter().cloned());
    let (params, x) = nf
        .sample(1, budget.seed)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::not_found("back-substitution", "no admissible parameters"))?;
    provenance.push(describe_parameters(&params));
    if !forms.iter().all(|f| f.evaluate(&x).is_ok_and(|v| v.is_zero_exact() == Some(true))) {
        return Err(Error::Verification("back-substituted point misses an input equation".into()));
    }
    let cert = sys.certificate_input(field, budget, "normal form back-substitution", provenance);
    SolutionCertificate::build(&cert, &constants(x, 0))
}

fn describe_parameters<F: Scalar>(p: &Parameters<F>) -> String {
    let all_canonical = p.y.iter().all(|y| y.sub(&F::one()).is_zero())
        && p.z.iter().chain(&p.w).all(|v| v.is_zero());
    if all_canonical {
        "parameters y = 1, z = 0, w = 0".into()
    } else {
        "parameters varied to avoid the given polynomial".into()
    }
}

fn solve_function_field(sys: &System, field: BirchField, budget: &SolverBudget) -> Result<SolutionCertificate> {
    if sys.forms.len() != 1 {
        return Err(Error::unsupported(
            "over R(t1..tp) only a single diagonal form is solved; systems need a normal form over the function field",
        ));
    }
    diagonal_solve(sys, field, budget)
}

/// One diagonal form handed straight to the field's diagonal oracle.
pub fn diagonal_solve(sys: &System, field: BirchField, budget: &SolverBudget) -> Result<SolutionCertificate> {
    budget.validate()?;
    let degrees = sys.check_homogeneous()?;
    if sys.forms.len() != 1 {
        return Err(Error::contract("diagonal-solve takes exactly one form"));
    }
    let n = sys.nvars();
    let f = split_parameters(&sys.forms[0], n);
    let Some((coeffs, d)) = diagonal_coeffs(&f) else {
        return Err(Error::contract("the form is not diagonal"));
    };
    debug_assert_eq!(d, degrees[0]);
    let p = sys.params;
    let sol = solve_diagonal(field, &coeffs, d, budget)?;
    let stage = match field {
        BirchField::RealFunctionField { .. } => "Tsen reduction",
        _ => "diagonal oracle",
    };
    match sol {
        DiagonalSolution::Rational(x) => {
            let input = sys.certificate_input(field, budget, stage, vec!["rational search".into()]);
            SolutionCertificate::build(&input, &constants(x, p))
        }
        DiagonalSolution::Real(x) => {
            let input = sys.certificate_input(field, budget, stage, vec!["real odd roots".into()]);
            SolutionCertificate::build(&input, &constants(x, p))
        }
        DiagonalSolution::FunctionField(sol) => {
            let provenance = vec![format!("Tsen reduction: {}", sol.method)];
            let input = sys.certificate_input(field, budget, stage, provenance);
            match &sol.exact {
                Some(x) => {
                    let mut coords: Vec<Polynomial<RealAlg>> = x.iter().map(|c| pad_parameters(c, sol.p, p)).collect();
                    unify_coordinates(&mut coords);
                    SolutionCertificate::build(&input, &coords)
                }
                None => {
                    let coords: Vec<_> = sol.enclosure.iter().map(|c| pad_parameters(c, sol.p, p)).collect();
                    SolutionCertificate::build(&input, &coords)
                }
            }
        }
    }
}

fn pad_parameters<F: Scalar>(c: &Polynomial<F>, have: usize, want: usize) -> Polynomial<F> {
    if have == want {
        return c.clone();
    }
    let map: Vec<usize> = (0..have).collect();
    c.remap(&map, want)
}

fn unify_coordinates(coords: &mut [Polynomial<RealAlg>]) {
    let mut values: Vec<RealAlg> = coords.iter().flat_map(|c| c.terms().map(|(_, v)| v.clone())).collect();
    RealAlg::unify(&mut values);
    let mut it = values.into_iter();
    for c in coords.iter_mut() {
        let nv = c.nvars();
        let terms: Vec<(Monomial, RealAlg)> = c.terms().map(|(m, _)| (m.clone(), it.next().expect("same count"))).collect();
        let mut out = Polynomial::zero(nv);
        for (m, v) in terms {
            out.add_term(m, v);
        }
        *c = out;
    }
}

/// The affine system `H_i(x) = c_i`, with each `H_i` homogeneous of odd
/// degree: appends a variable `w`, solves `H_i(x) - c_i w^(d_i) = 0` with
/// `w != 0`, and scales to `w = 1`.
pub fn solve_affine(
    sys: &System,
    field: BirchField,
    config: &PipelineConfig,
    budget: &SolverBudget,
) -> Result<SolutionCertificate> {
    budget.validate()?;
    let n = sys.nvars();
    let p = sys.params;
    let vars: Vec<usize> = (0..n).collect();
    let hvar = (0..)
        .map(|k| if k == 0 { "w".to_string() } else { format!("w{k}") })
        .find(|c| sys.names.index(c).is_none())
        .expect("fresh name");
    // the homogenizing variable goes first so diagonal shortcuts pick it
    let mut names = vec![hvar.clone()];
    names.extend(sys.names.names().iter().cloned());
    let shift: Vec<usize> = (1..=n + p).collect();
    let mut homog = Vec::with_capacity(sys.forms.len());
    for (i, f) in sys.forms.iter().enumerate() {
        let degs: Vec<u32> = f.terms().map(|(m, _)| m.degree_in(&vars)).filter(|&e| e > 0).collect();
        let Some(&d) = degs.first() else {
            return Err(Error::contract(format!("equation {} has no variables", i + 1)));
        };
        if degs.iter().any(|&e| e != d) {
            return Err(Error::contract(format!(
                "equation {} is not of the form H(x) = c with H homogeneous",
                i + 1
            )));
        }
        if d % 2 == 0 {
            return Err(Error::contract(format!("equation {} has even degree {d}", i + 1)));
        }
        let g = f.remap(&shift, n + p + 1);
        let mut h = Polynomial::zero(n + p + 1);
        for (m, c) in g.terms() {
            let mut e = m.exponents().to_vec();
            e.resize(n + p + 1, 0);
            if (1..=n).all(|v| e[v] == 0) {
                e[0] = d;
            }
            h.add_term(Monomial::new(e), c.clone());
        }
        homog.push(h);
    }
    let mut avoid = Polynomial::var(n + p + 1, 0);
    if let Some(g) = &sys.avoid {
        let gd = g.terms().map(|(m, _)| m.degree_in(&vars)).max().unwrap_or(0);
        let mut gh = Polynomial::zero(n + p + 1);
        for (m, c) in g.remap(&shift, n + p + 1).terms() {
            let mut e = m.exponents().to_vec();
            e.resize(n + p + 1, 0);
            let k: u32 = (1..=n).map(|v| e[v]).sum();
            e[0] += gd - k;
            gh.add_term(Monomial::new(e), c.clone());
        }
        avoid = avoid.mul(&gh);
    }
    let hsys = System {
        names: VarNames::new(names),
        params: p,
        forms: homog,
        avoid: Some(avoid),
    };
    let hcert = solve_system(&hsys, field, config, budget)?;
    scale_affine(sys, &hcert, field, budget)
}

/// Divides a certified homogeneous point by its first coordinate.
fn scale_affine(sys: &System, hcert: &SolutionCertificate, field: BirchField, budget: &SolverBudget) -> Result<SolutionCertificate> {
    let mut provenance = hcert.provenance.clone();
    provenance.push(format!("homogenized with `{}` and scaled to {} = 1", hcert.variables[0], hcert.variables[0]));
    let stage = format!("affine homogenization, then {}", hcert.stage);
    let input = sys.certificate_input(field, budget, &stage, provenance);
    let p = sys.params;
    if hcert.point.iter().flat_map(|c| &c.terms).any(|(_, v)| matches!(v, super::ValueJson::Interval { .. })) {
        return Err(Error::unsupported("scaling an enclosed function field point is not certified"));
    }
    let coords = decode_exact(hcert)?;
    let w = &coords[0];
    if w.terms().any(|(m, _)| m.degree() > 0) {
        return Err(Error::unsupported(
            "the homogenizing coordinate depends on the parameters; the scaled point is not polynomial",
        ));
    }
    let w0 = w.coeff(&Monomial::new(vec![0; p]));
    let inv = w0.inv().ok_or_else(|| Error::Verification("homogenizing coordinate is zero".into()))?;
    let mut scaled: Vec<Polynomial<RealAlg>> = coords[1..].iter().map(|c| c.scale(&inv)).collect();
    if field == BirchField::Rationals {
        let rational: Option<Vec<Polynomial<Q>>> = scaled
            .iter()
            .map(|c| {
                let mut out = Polynomial::zero(p);
                for (m, v) in c.terms() {
                    out.add_term(m.clone(), v.as_rational()?);
                }
                Some(out)
            })
            .collect();
        let rational = rational.ok_or_else(|| Error::Verification("rational point scaled out of Q".into()))?;
        return SolutionCertificate::build(&input, &rational);
    }
    unify_coordinates(&mut scaled);
    SolutionCertificate::build(&input, &scaled)
}

fn decode_exact(cert: &SolutionCertificate) -> Result<Vec<Polynomial<RealAlg>>> {
    cert.exact_point()
}

/// `count` certified points of the zero set, sampled from the rational
/// parametrization of the normal form.
pub fn sample_points<F: BaseScalar + CertScalar>(
    sys: &System,
    nf: &NormalFormData<F>,
    count: usize,
    seed: u64,
    budget: &SolverBudget,
) -> Result<Vec<SolutionCertificate>> {
    let forms: Vec<Polynomial<F>> = sys.lifted()?;
    let mut out = Vec::with_capacity(count);
    for (k, (params, x)) in nf.sample(count, seed)?.into_iter().enumerate() {
        if !forms.iter().all(|f| f.evaluate(&x).is_ok_and(|v| v.is_zero_exact() == Some(true))) {
            return Err(Error::Verification(format!("sample {k} misses an input equation")));
        }
        let mut provenance = nf.provenance.clone();
        provenance.push(format!("sample {k}: {}", describe_parameters(&params)));
        let input = sys.certificate_input(F::field(), budget, "rational parametrization", provenance);
        out.push(SolutionCertificate::build(&input, &constants(x, 0))?);
    }
    Ok(out)
}

/// Normal form of a parsed system over an exact base field.
pub fn system_normal_form<F: BaseScalar>(
    sys: &System,
    config: &PipelineConfig,
    budget: &SolverBudget,
) -> Result<NormalFormData<F>> {
    sys.check_homogeneous()?;
    let forms: Vec<Polynomial<F>> = sys.lifted()?;
    let avoid = sys.avoid.as_ref().map(crate::poly::lift::<F>);
    normal_form(&forms, avoid.as_ref(), config, budget)
}

/// A positive residual tolerance as an exact rational.
pub fn tolerance_from_f64(tol: f64) -> Result<Q> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::contract("tolerance must be positive and finite"));
    }
    crate::scalar::rational_from_f64(tol).ok_or_else(|| Error::contract("tolerance is not representable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PipelineConfig {
        PipelineConfig::default()
    }

    #[test]
    fn rational_diagonal_fast_path() {
        let sys = System::parse("x^3 + 2*y^3 - 3*z^3", BirchField::Rationals, None).unwrap();
        let cert = solve_system(&sys, BirchField::Rationals, &cfg(), &SolverBudget::default()).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.stage, "diagonal oracle");
    }

    #[test]
    fn affine_sum_of_cubes_over_r() {
        let sys = System::parse("x^3 + y^3 = 1", BirchField::RealClosed, None).unwrap();
        let cert = solve_affine(&sys, BirchField::RealClosed, &cfg(), &SolverBudget::default()).unwrap();
        cert.verify().unwrap();
        assert!(cert.stage.starts_with("affine"));
    }

    #[test]
    fn dense_cubic_over_r_via_normal_form() {
        let text = "x1^3 + x2^3 - 2*x3^3 + x4^3 + x5^3 + 5*x6^3 - x7^3 + x7*x8^2 + x8^3";
        let sys = System::parse(text, BirchField::RealClosed, Some("x8")).unwrap();
        let cert = solve_system(&sys, BirchField::RealClosed, &cfg(), &SolverBudget::default()).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.stage, "normal form back-substitution");
    }

    #[test]
    fn function_field_affine() {
        let field = BirchField::parse("R(t1)").unwrap();
        let sys = System::parse("x1^3 + t1*x2^3 + x3^3 + x4^3 = 1", field, None).unwrap();
        assert_eq!(sys.params, 1);
        let cert = solve_affine(&sys, field, &cfg(), &SolverBudget::default()).unwrap();
        cert.verify().unwrap();
    }

    #[test]
    fn input_errors() {
        let sys = System::parse("x^2 + y^3", BirchField::RealClosed, None).unwrap();
        let msg = solve_system(&sys, BirchField::RealClosed, &cfg(), &SolverBudget::default())
            .unwrap_err()
            .to_string();
        assert!(msg.contains("--affine"), "{msg}");
        let sys = System::parse("x^2 + y^2", BirchField::RealClosed, None).unwrap();
        assert!(solve_system(&sys, BirchField::RealClosed, &cfg(), &SolverBudget::default()).is_err());
    }
}
