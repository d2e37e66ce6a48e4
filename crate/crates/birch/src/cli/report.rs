//! Executes each subcommand and renders its report.

use std::fmt::{Display, Write as _};

use serde_json::{json, Value};

use super::{Command, Format, JobSpec};
use crate::error::{Error, Result};
use crate::fields::{BaseScalar, BirchField};
use crate::pipeline::{
    birch_orthogonal_blocks, brauer_orthogonal_sequence, diagonal_solve, sample_points, solve_affine, solve_system,
    system_normal_form, Members, OrthogonalFamily, SolutionCertificate, System,
};
use crate::poly::{lift, Polynomial, VarNames};
use crate::scalar::{RealAlg, Q};
use crate::strength::{collective_strength_bounds, regularize, StrengthBounds};

/// Runs the job and returns its report, or the error that stopped it.
pub fn execute(job: &JobSpec) -> Result<String> {
    match job.command {
        Command::Solve => {
            let sys = job.system()?;
            let cert = if job.affine {
                solve_affine(&sys, job.field, &job.config(), &job.budget)?
            } else {
                solve_system(&sys, job.field, &job.config(), &job.budget)?
            };
            Ok(render_certificates(&[cert], job.format))
        }
        Command::Sample => {
            let sys = job.system()?;
            let certs = match job.field {
                BirchField::Rationals => sample::<Q>(job, &sys)?,
                BirchField::RealClosed => sample::<RealAlg>(job, &sys)?,
                BirchField::RealFunctionField { .. } => {
                    return Err(Error::unsupported("sampling needs the normal form, available over Q and R"))
                }
            };
            Ok(render_certificates(&certs, job.format))
        }
        Command::DiagonalSolve => {
            let cert = diagonal_solve(&job.system()?, job.field, &job.budget)?;
            Ok(render_certificates(&[cert], job.format))
        }
        Command::Strength => strength(job),
        Command::Regularize => regularize_report(job),
        Command::Orthogonalize => match job.field {
            BirchField::Rationals => orthogonalize::<Q>(job),
            BirchField::RealClosed => orthogonalize::<RealAlg>(job),
            BirchField::RealFunctionField { .. } => {
                Err(Error::unsupported("orthogonal families are built over Q and R"))
            }
        },
        Command::Verify => {
            let path = job.certificate.as_ref().expect("validated");
            let cert = SolutionCertificate::from_json(&std::fs::read_to_string(path)?)?;
            cert.verify()?;
            let summary = format!(
                "certificate verified: {} equation(s) over {}, stage `{}`",
                cert.equations.len(),
                cert.field,
                cert.stage
            );
            Ok(match job.format {
                Format::Text => summary + "\n",
                Format::Json => pretty(&json!({"verified": true, "stage": cert.stage, "hash": cert.hash})),
            })
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn render_certificates(certs: &[SolutionCertificate], format: Format) -> String {
    match format {
        Format::Json if certs.len() == 1 => certs[0].to_json() + "\n",
        Format::Json => serde_json::to_string_pretty(certs).expect("serializable") + "\n",
        Format::Text => certs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if certs.len() == 1 {
                    c.to_text()
                } else {
                    format!("# point {}\n{}", k + 1, c.to_text())
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn sample<F: BaseScalar + crate::pipeline::CertScalar>(job: &JobSpec, sys: &System) -> Result<Vec<SolutionCertificate>> {
    let nf = system_normal_form::<F>(sys, &job.config(), &job.budget)?;
    sample_points(sys, &nf, job.count, job.budget.seed, &job.budget)
}

/// Rational forms without field parameters.
fn rational_forms(job: &JobSpec) -> Result<(Vec<Polynomial<Q>>, VarNames)> {
    let sys = job.system()?;
    if sys.params > 0 {
        return Err(Error::unsupported("this command takes forms with rational coefficients"));
    }
    for (i, f) in sys.forms.iter().enumerate() {
        if !f.is_homogeneous() {
            return Err(Error::contract(format!(
                "equation {} is not homogeneous; pass it to `solve --affine` instead",
                i + 1
            )));
        }
    }
    Ok((sys.forms, sys.names))
}

fn bound_text(b: &StrengthBounds) -> (String, String) {
    (
        b.lower.as_ref().map_or("none".into(), |l| l.to_string()),
        b.upper.map_or("inf".into(), |u| u.to_string()),
    )
}

fn strength(job: &JobSpec) -> Result<String> {
    let (forms, names) = rational_forms(job)?;
    let b = collective_strength_bounds(&forms, &job.budget)?;
    let (lower, upper) = bound_text(&b);
    let classes: Vec<Value> = b
        .classes
        .iter()
        .map(|c| {
            json!({
                "degree": c.degree,
                "count": c.count,
                "lower": c.lower.as_ref().map(|l| l.to_string()),
                "upper": c.upper,
                "lower_provenance": c.lower_provenance,
                "upper_provenance": c.upper_provenance,
                "witness": c.witness.as_ref().map(|(comb, cert)| json!({
                    "combination": comb,
                    "pairs": cert.pairs.iter().map(|(g, h)| [names.format(g), names.format(h)]).collect::<Vec<_>>(),
                })),
            })
        })
        .collect();
    Ok(match job.format {
        Format::Json => pretty(&json!({
            "stage": "strength bounds",
            "lower": lower,
            "upper": upper,
            "lower_provenance": b.lower_provenance,
            "upper_provenance": b.upper_provenance,
            "classes": classes,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "stage: strength bounds");
            let _ = writeln!(s, "collective strength in [{lower}, {upper}]");
            let _ = writeln!(s, "  lower: {}", b.lower_provenance);
            let _ = writeln!(s, "  upper: {}", b.upper_provenance);
            for c in &b.classes {
                let lo = c.lower.as_ref().map_or("none".into(), |l| l.to_string());
                let hi = c.upper.map_or("inf".into(), |u| u.to_string());
                let _ = writeln!(s, "degree {} ({} form(s)): [{lo}, {hi}]", c.degree, c.count);
                if let Some((comb, cert)) = &c.witness {
                    let pairs: Vec<String> = cert
                        .pairs
                        .iter()
                        .map(|(g, h)| format!("({})*({})", names.format(g), names.format(h)))
                        .collect();
                    let _ = writeln!(s, "  combination {comb:?} = {}", pairs.join(" + "));
                }
            }
            s
        }
    })
}

fn regularize_report(job: &JobSpec) -> Result<String> {
    let (forms, names) = rational_forms(job)?;
    let t = job.threshold.as_ref().expect("validated");
    let reg = regularize(&forms, &|tuple| t.eval(tuple), &job.budget)?;
    let verified = reg.verify();
    if !verified {
        return Err(Error::Verification("regularization certificate".into()));
    }
    let generators: Vec<String> = reg.generators.iter().map(|g| names.format(g)).collect();
    let memberships: Vec<Value> = reg
        .memberships
        .iter()
        .map(|m| {
            json!({
                "input": names.format(&m.input),
                "cofactors": m.cofactors.iter().map(|c| names.format(c)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let trace: Vec<String> = reg.trace.iter().map(|d| d.to_string()).collect();
    Ok(match job.format {
        Format::Json => pretty(&json!({
            "stage": "regularization",
            "threshold": t.text(),
            "generators": generators,
            "memberships": memberships,
            "trace": trace,
            "steps": reg.steps,
            "heuristic": reg.heuristic,
            "verified": verified,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "stage: regularization (threshold {})", t.text());
            for g in &generators {
                let _ = writeln!(s, "generator: {g}");
            }
            for m in &reg.memberships {
                let terms: Vec<String> = m
                    .cofactors
                    .iter()
                    .zip(&generators)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, g)| format!("({})*({g})", names.format(c)))
                    .collect();
                let _ = writeln!(s, "{} = {}", names.format(&m.input), terms.join(" + "));
            }
            let _ = writeln!(s, "degree tuples: {}", trace.join(" > "));
            for step in &reg.steps {
                let _ = writeln!(s, "  {step}");
            }
            if reg.heuristic {
                let _ = writeln!(s, "strength of the generators is estimated by bounded search");
            }
            s
        }
    })
}

fn vector_text<F: Display>(v: &[F]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn orthogonalize<F: BaseScalar + Display>(job: &JobSpec) -> Result<String> {
    let (forms, names) = rational_forms(job)?;
    let lifted: Vec<Polynomial<F>> = forms.iter().map(lift::<F>).collect();
    let avoid = job
        .avoid
        .as_deref()
        .map(|g| crate::poly::parse_polynomial(g, Some(&names)).map(|(g, _)| lift::<F>(&g)))
        .transpose()?;
    let (family, stage): (OrthogonalFamily<F>, &str) = match job.ell {
        None if lifted.len() == 1 && avoid.is_none() => (
            brauer_orthogonal_sequence(&lifted[0], job.count, &job.budget)?,
            "orthogonal sequence, one vector at a time",
        ),
        ell => (
            birch_orthogonal_blocks(&lifted, job.count, ell.unwrap_or(3), avoid.as_ref(), &job.budget)?.family,
            "orthogonal subspaces",
        ),
    };
    if !family.verify() {
        return Err(Error::Verification("orthogonal family".into()));
    }
    let members: Vec<Vec<String>> = match &family.members {
        Members::Vectors(vs) => vs.iter().map(|v| vec![vector_text(v)]).collect(),
        Members::Subspaces(bs) => bs.iter().map(|b| b.iter().map(|v| vector_text(v)).collect()).collect(),
    };
    let k = family.members.flat().len();
    let ynames = VarNames::new((1..=k).map(|j| format!("y{j}")).collect());
    let restricted: Vec<String> = family.certificate.iter().map(|c| ynames.format(c)).collect();
    Ok(match job.format {
        Format::Json => pretty(&json!({
            "stage": stage,
            "members": members,
            "restricted_forms": restricted,
            "provenance": family.provenance,
            "verified": true,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "stage: {stage}");
            for (j, m) in members.iter().enumerate() {
                let _ = writeln!(s, "member {}: {}", j + 1, m.join(", "));
            }
            for r in &restricted {
                let _ = writeln!(s, "restricted: {r}");
            }
            for p in &family.provenance {
                let _ = writeln!(s, "  {p}");
            }
            s
        }
    })
}
