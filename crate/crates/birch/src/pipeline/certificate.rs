//! Solution certificates: a point, its residuals and where it came from,
//! serialized so that `verify` needs nothing but polynomial evaluation.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fields::BirchField;
use crate::poly::{lift, polynomial_from_json, polynomial_to_json, Monomial, PolyJson, Polynomial, UPoly, VarNames};
use crate::scalar::{parse_rational, Interval, NumberField, RealAlg, Scalar, Q};

pub const FORMAT_VERSION: u32 = 1;

/// A real number field given by a modulus and an interval isolating the
/// chosen root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    /// Coefficients, constant term first.
    pub modulus: Vec<String>,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueJson {
    Rational(String),
    /// `sum rep[k] g^k` with `g` the generator of `number_fields[field]`.
    Algebraic { field: usize, rep: Vec<String> },
    Interval { lo: String, hi: String },
}

/// A polynomial in the field parameters (a constant when there are none).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateJson {
    pub terms: Vec<(Vec<u32>, ValueJson)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCertificate {
    pub format_version: u32,
    pub field: String,
    /// Variables followed by the field parameters.
    pub variables: Vec<String>,
    pub parameters: usize,
    pub equations: Vec<PolyJson>,
    pub avoid: Option<PolyJson>,
    pub number_fields: Vec<FieldJson>,
    pub point: Vec<CoordinateJson>,
    pub residuals: Vec<CoordinateJson>,
    /// Approximate value of the avoided polynomial at the point.
    pub nonvanishing: Option<String>,
    /// Residual width allowed when coordinates are enclosures.
    pub tolerance: String,
    pub stage: String,
    pub provenance: Vec<String>,
    pub hash: String,
}

/// Scalars a certificate can carry.
pub trait CertScalar: Scalar {
    fn encode(&self, enc: &mut Encoder) -> ValueJson;
    /// Exact zero test; `None` when only an enclosure is known.
    fn exact_zero(&self) -> Option<bool>;
    fn approx_text(&self) -> String;
    /// Prepares a batch of values for encoding.
    fn unify(_values: &mut [Self]) {}
}

/// Collects number fields while values are encoded.
#[derive(Default)]
pub struct Encoder {
    ids: HashMap<u64, usize>,
    fields: Vec<FieldJson>,
}

fn q_text(x: &Q) -> String {
    x.to_string()
}

fn tiny() -> Q {
    Q::new(1.into(), BigInt::from(1u64) << 64)
}

impl Encoder {
    fn field_index(&mut self, f: &Arc<NumberField>) -> usize {
        if let Some(&k) = self.ids.get(&f.id()) {
            return k;
        }
        let iv = f.generator_interval(&tiny());
        self.fields.push(FieldJson {
            modulus: f.modulus().coeffs().iter().map(q_text).collect(),
            lo: q_text(iv.lo()),
            hi: q_text(iv.hi()),
        });
        self.ids.insert(f.id(), self.fields.len() - 1);
        self.fields.len() - 1
    }
}

impl CertScalar for Q {
    fn encode(&self, _: &mut Encoder) -> ValueJson {
        ValueJson::Rational(q_text(self))
    }
    fn exact_zero(&self) -> Option<bool> {
        Some(Scalar::is_zero(self))
    }
    fn approx_text(&self) -> String {
        q_text(self)
    }
}

impl CertScalar for RealAlg {
    fn encode(&self, enc: &mut Encoder) -> ValueJson {
        match (self.as_rational(), self.field()) {
            (None, Some(f)) => ValueJson::Algebraic {
                field: enc.field_index(f),
                rep: self.rep().coeffs().iter().map(q_text).collect(),
            },
            (q, _) => ValueJson::Rational(q_text(&q.unwrap_or_else(|| self.rep().coeff(0)))),
        }
    }
    fn exact_zero(&self) -> Option<bool> {
        self.is_zero_exact()
    }
    fn unify(values: &mut [Self]) {
        unify_fields(values)
    }
    fn approx_text(&self) -> String {
        match self.as_rational() {
            Some(q) => q_text(&q),
            None => format!("{:.12}", self.to_f64()),
        }
    }
}

impl CertScalar for Interval {
    fn encode(&self, _: &mut Encoder) -> ValueJson {
        ValueJson::Interval {
            lo: q_text(self.lo()),
            hi: q_text(self.hi()),
        }
    }
    fn exact_zero(&self) -> Option<bool> {
        if self.contains_zero() {
            None
        } else {
            Some(false)
        }
    }
    fn approx_text(&self) -> String {
        format!("{:.12} +- {:.1e}", self.midpoint_f64(), self.width_f64() / 2.0)
    }
}

/// Expresses values of subfields inside larger fields they embed into, so
/// that a certificate names as few fields as possible.
pub fn unify_fields(values: &mut [RealAlg]) {
    let mut fields: Vec<Arc<NumberField>> = Vec::new();
    for v in values.iter() {
        if let Some(f) = v.field() {
            if !fields.iter().any(|g| g.id() == f.id()) {
                fields.push(f.clone());
            }
        }
    }
    fields.sort_by_key(|f| std::cmp::Reverse(f.degree()));
    for v in values.iter_mut() {
        let Some(f) = v.field().cloned() else {
            continue;
        };
        if let Some(w) = fields
            .iter()
            .filter(|g| g.id() != f.id() && g.degree() > f.degree())
            .find_map(|g| v.embed_into(g))
        {
            *v = w;
        }
    }
}

fn encode_poly<C: CertScalar>(p: &Polynomial<C>, enc: &mut Encoder) -> CoordinateJson {
    CoordinateJson {
        terms: p
            .to_dense_terms()
            .into_iter()
            .map(|(e, c)| (e, c.encode(enc)))
            .collect(),
    }
}

/// Substitutes the coordinates into `f`, leaving the field parameters free.
fn residual<C: Scalar>(f: &Polynomial<Q>, point: &[Polynomial<C>], params: usize) -> Polynomial<C> {
    let mut images = point.to_vec();
    images.extend((0..params).map(|j| Polynomial::var(params, j)));
    lift::<C>(f).compose(&images, params)
}

/// Whether a residual polynomial certifies zero: exactly, or with every
/// coefficient enclosure containing zero within `tol`.
fn residual_holds<C: CertScalar>(r: &Polynomial<C>, tol: &Q) -> bool {
    r.terms().all(|(_, c)| match c.exact_zero() {
        Some(z) => z,
        None => c.enclosure().is_some_and(|iv| iv.contains_zero() && &iv.magnitude() <= tol),
    })
}

fn nonzero<C: CertScalar>(r: &Polynomial<C>) -> bool {
    r.terms().any(|(_, c)| c.exact_zero() == Some(false))
}

pub struct CertificateInput<'a> {
    pub field: BirchField,
    pub names: &'a VarNames,
    pub parameters: usize,
    pub equations: &'a [Polynomial<Q>],
    pub avoid: Option<&'a Polynomial<Q>>,
    pub tolerance: Q,
    pub stage: String,
    pub provenance: Vec<String>,
}

impl SolutionCertificate {
    /// Checks the point against the equations and records everything.
    pub fn build<C: CertScalar>(input: &CertificateInput, point: &[Polynomial<C>]) -> Result<Self> {
        let n = input.names.len() - input.parameters;
        if point.len() != n {
            return Err(Error::contract(format!("point has {} coordinates, expected {n}", point.len())));
        }
        if point.iter().all(|c| c.terms().all(|(_, v)| v.exact_zero() == Some(true))) {
            return Err(Error::Verification("the point is zero".into()));
        }
        let mut enc = Encoder::default();
        let mut residuals = Vec::with_capacity(input.equations.len());
        for (k, f) in input.equations.iter().enumerate() {
            let r = residual(f, point, input.parameters);
            if !residual_holds(&r, &input.tolerance) {
                return Err(Error::Verification(format!("equation {} does not vanish at the point", k + 1)));
            }
            residuals.push(encode_poly(&r.map_coeffs(|c| if c.exact_zero() == Some(true) { C::zero() } else { c.clone() }), &mut enc));
        }
        let nonvanishing = match input.avoid {
            Some(g) => {
                let v = residual(g, point, input.parameters);
                if !nonzero(&v) {
                    return Err(Error::Verification("the avoided polynomial vanishes at the point".into()));
                }
                Some(
                    v.terms()
                        .map(|(m, c)| format!("{}{}", c.approx_text(), param_suffix(m, input.names, n)))
                        .collect::<Vec<_>>()
                        .join(" + "),
                )
            }
            None => None,
        };
        let coords = point.iter().map(|c| encode_poly(c, &mut enc)).collect();
        let mut cert = SolutionCertificate {
            format_version: FORMAT_VERSION,
            field: input.field.to_string(),
            variables: input.names.names().to_vec(),
            parameters: input.parameters,
            equations: input.equations.iter().map(|f| polynomial_to_json(f, input.names)).collect(),
            avoid: input.avoid.map(|g| polynomial_to_json(g, input.names)),
            number_fields: enc.fields,
            point: coords,
            residuals,
            nonvanishing,
            tolerance: q_text(&input.tolerance),
            stage: input.stage.clone(),
            provenance: input.provenance.clone(),
            hash: String::new(),
        };
        cert.hash = cert.compute_hash();
        Ok(cert)
    }

    /// SHA-256 of the canonical JSON with an empty hash field.
    pub fn compute_hash(&self) -> String {
        let mut c = self.clone();
        c.hash.clear();
        let text = serde_json::to_string(&c).expect("serializable");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::contract(format!("malformed certificate: {e}")))
    }

    fn nvars(&self) -> usize {
        self.variables.len().saturating_sub(self.parameters)
    }

    /// Human-readable report.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "stage: {}", self.stage);
        let _ = writeln!(s, "field: {}", self.field);
        let names = VarNames::new(self.variables.clone());
        for (k, eq) in self.equations.iter().enumerate() {
            if let Ok((p, _)) = polynomial_from_json(eq) {
                let _ = writeln!(s, "equation {}: {} = 0", k + 1, names.format(&p));
            }
        }
        let decoded = self.decode_point_text();
        for (name, value) in self.variables.iter().zip(decoded) {
            let _ = writeln!(s, "{name} = {value}");
        }
        let exact = self.residuals.iter().all(|r| r.terms.is_empty());
        let _ = writeln!(s, "residuals: {}", if exact { "all exactly zero" } else { "enclosures contain zero" });
        if let Some(v) = &self.nonvanishing {
            let _ = writeln!(s, "avoided polynomial at the point: {v}");
        }
        for p in &self.provenance {
            let _ = writeln!(s, "  {p}");
        }
        let _ = writeln!(s, "hash: {}", self.hash);
        s
    }

    fn decode_point_text(&self) -> Vec<String> {
        let n = self.nvars();
        let names = VarNames::new(self.variables.clone());
        self.point
            .iter()
            .map(|c| {
                if c.terms.is_empty() {
                    return "0".into();
                }
                c.terms
                    .iter()
                    .map(|(e, v)| {
                        let value = match v {
                            ValueJson::Rational(t) => t.clone(),
                            ValueJson::Algebraic { field, rep } => self.algebraic_text(*field, rep),
                            ValueJson::Interval { lo, hi } => format!("[{lo}, {hi}]"),
                        };
                        format!("{value}{}", param_suffix(&Monomial::new(e.clone()), &names, n))
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect()
    }

    fn algebraic_text(&self, field: usize, rep: &[String]) -> String {
        self.decode_value(&ValueJson::Algebraic { field, rep: rep.to_vec() }, &mut self.decode_fields().unwrap_or_default())
            .map(|v| format!("{:.12} (degree {})", v.to_f64(), v.field_degree()))
            .unwrap_or_else(|_| "?".into())
    }

    fn decode_fields(&self) -> Result<Vec<RealAlg>> {
        self.number_fields
            .iter()
            .map(|f| {
                let coeffs = f.modulus.iter().map(|c| parse_q(c)).collect::<Result<Vec<_>>>()?;
                RealAlg::root_in(&UPoly::new(coeffs), &parse_q(&f.lo)?, &parse_q(&f.hi)?)
            })
            .collect()
    }

    fn decode_value(&self, v: &ValueJson, gens: &mut [RealAlg]) -> Result<RealAlg> {
        match v {
            ValueJson::Rational(t) => Ok(RealAlg::rational(parse_q(t)?)),
            ValueJson::Algebraic { field, rep } => {
                let g = gens.get(*field).ok_or_else(|| Error::Verification(format!("unknown number field {field}")))?;
                let mut acc = RealAlg::zero();
                for c in rep.iter().rev() {
                    acc = acc.mul(g).add(&RealAlg::rational(parse_q(c)?));
                }
                Ok(acc)
            }
            ValueJson::Interval { .. } => Err(Error::Verification("enclosure where an exact value was expected".into())),
        }
    }

    fn decode_interval(&self, v: &ValueJson, gens: &mut [RealAlg], width: &Q) -> Result<Interval> {
        match v {
            ValueJson::Interval { lo, hi } => {
                let (lo, hi) = (parse_q(lo)?, parse_q(hi)?);
                if lo > hi {
                    return Err(Error::Verification("empty interval".into()));
                }
                Ok(Interval::new(lo, hi))
            }
            other => Ok(self.decode_value(other, gens)?.enclosure_within(width)),
        }
    }

    /// The point with exact coordinates; fails on enclosures.
    pub fn exact_point(&self) -> Result<Vec<Polynomial<RealAlg>>> {
        let mut gens = self.decode_fields()?;
        self.point
            .iter()
            .map(|c| self.decode_coordinate(c, self.parameters, |v| self.decode_value(v, &mut gens)))
            .collect()
    }

    fn is_enclosure(&self) -> bool {
        self.point
            .iter()
            .flat_map(|c| &c.terms)
            .any(|(_, v)| matches!(v, ValueJson::Interval { .. }))
    }

    /// Re-checks the certificate from its serialized data alone: a nonzero
    /// point, every residual, the stored residuals, the avoided polynomial,
    /// then the hash. Errors name the first failing item.
    pub fn verify(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Verification(format!("unknown format version {}", self.format_version)));
        }
        self.verify_content()?;
        if self.hash != self.compute_hash() {
            return Err(Error::Verification("hash mismatch: the certificate was modified".into()));
        }
        Ok(())
    }

    fn verify_content(&self) -> Result<()> {
        let n = self.nvars();
        let p = self.parameters;
        if self.point.len() != n {
            return Err(Error::Verification("point length differs from the variable count".into()));
        }
        let equations: Vec<Polynomial<Q>> = self
            .equations
            .iter()
            .map(|e| polynomial_from_json(e).map(|(f, _)| f))
            .collect::<Result<_>>()?;
        if equations.iter().any(|f| f.nvars() != n + p) || self.residuals.len() != equations.len() {
            return Err(Error::Verification("equations do not match the variable list".into()));
        }
        let avoid = self.avoid.as_ref().map(|g| polynomial_from_json(g).map(|(f, _)| f)).transpose()?;
        let tol = parse_q(&self.tolerance)?;
        let mut gens = self.decode_fields()?;
        if self.is_enclosure() {
            let width = tiny();
            let point: Vec<Polynomial<Interval>> = self
                .point
                .iter()
                .map(|c| self.decode_coordinate(c, p, |v| self.decode_interval(v, &mut gens, &width)))
                .collect::<Result<_>>()?;
            self.check(&equations, avoid.as_ref(), &point, &tol, |stored| {
                stored.terms.iter().all(|(_, v)| match v {
                    ValueJson::Interval { lo, hi } => {
                        matches!((parse_q(lo), parse_q(hi)), (Ok(a), Ok(b)) if Interval::new(a.clone(), b.clone()).contains_zero())
                    }
                    ValueJson::Rational(t) => parse_q(t).is_ok_and(|q| Scalar::is_zero(&q)),
                    ValueJson::Algebraic { .. } => false,
                })
            })
        } else {
            let point: Vec<Polynomial<RealAlg>> = self
                .point
                .iter()
                .map(|c| self.decode_coordinate(c, p, |v| self.decode_value(v, &mut gens)))
                .collect::<Result<_>>()?;
            self.check(&equations, avoid.as_ref(), &point, &tol, |stored| stored.terms.is_empty())
        }
    }

    fn decode_coordinate<C: Scalar>(
        &self,
        c: &CoordinateJson,
        p: usize,
        mut value: impl FnMut(&ValueJson) -> Result<C>,
    ) -> Result<Polynomial<C>> {
        let mut out = Polynomial::zero(p);
        for (e, v) in &c.terms {
            if e.len() != p {
                return Err(Error::Verification("coordinate exponent of the wrong length".into()));
            }
            out.add_term(Monomial::new(e.clone()), value(v)?);
        }
        Ok(out)
    }

    fn check<C: CertScalar>(
        &self,
        equations: &[Polynomial<Q>],
        avoid: Option<&Polynomial<Q>>,
        point: &[Polynomial<C>],
        tol: &Q,
        stored_ok: impl Fn(&CoordinateJson) -> bool,
    ) -> Result<()> {
        if point.iter().all(|c| c.terms().all(|(_, v)| v.exact_zero() == Some(true))) {
            return Err(Error::Verification("the point is zero".into()));
        }
        let names = VarNames::new(self.variables.clone());
        for (k, f) in equations.iter().enumerate() {
            let r = residual(f, point, self.parameters);
            if !residual_holds(&r, tol) {
                return Err(Error::Verification(format!(
                    "equation {} ({} = 0) does not vanish at the point",
                    k + 1,
                    names.format(f)
                )));
            }
            if !stored_ok(&self.residuals[k]) {
                return Err(Error::Verification(format!(
                    "recorded residual of equation {} ({} = 0) is not zero",
                    k + 1,
                    names.format(f)
                )));
            }
        }
        if let Some(g) = avoid {
            if !nonzero(&residual(g, point, self.parameters)) {
                return Err(Error::Verification("the avoided polynomial vanishes at the point".into()));
            }
        }
        Ok(())
    }
}

fn param_suffix(m: &Monomial, names: &VarNames, offset: usize) -> String {
    let mut s = String::new();
    for (j, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!("*{}", names.names()[offset + j])),
            _ => s.push_str(&format!("*{}^{e}", names.names()[offset + j])),
        }
    }
    s
}

fn parse_q(t: &str) -> Result<Q> {
    parse_rational(t).ok_or_else(|| Error::Verification(format!("bad rational `{t}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    fn input<'a>(names: &'a VarNames, eqs: &'a [Polynomial<Q>]) -> CertificateInput<'a> {
        CertificateInput {
            field: BirchField::RealClosed,
            names,
            parameters: 0,
            equations: eqs,
            avoid: None,
            tolerance: Q::new(1.into(), BigInt::from(10u64).pow(9)),
            stage: "test".into(),
            provenance: vec![],
        }
    }

    #[test]
    fn rational_point_round_trip() {
        let sys = parse_system("x^3 + 2*y^3 - 3*z^3").unwrap();
        let one = Polynomial::constant(0, Q::from_integer(1.into()));
        let cert = SolutionCertificate::build(&input(&sys.names, &sys.polys), &[one.clone(), one.clone(), one]).unwrap();
        let back = SolutionCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        back.verify().unwrap();
        assert!(cert.to_text().contains("x = 1"));
    }

    #[test]
    fn algebraic_point_and_tampering() {
        let sys = parse_system("x^3 + y^3 - 2*z^3").unwrap();
        let c = RealAlg::rational(Q::from_integer(2.into())).odd_root(3).unwrap();
        let pt: Vec<Polynomial<RealAlg>> = [c, RealAlg::zero(), RealAlg::one()]
            .into_iter()
            .map(|v| Polynomial::constant(0, v))
            .collect();
        let cert = SolutionCertificate::build(&input(&sys.names, &sys.polys), &pt).unwrap();
        assert_eq!(cert.number_fields.len(), 1);
        cert.verify().unwrap();
        let mut bad = cert.clone();
        bad.residuals[0].terms.push((vec![], ValueJson::Rational("1".into())));
        let msg = bad.verify().unwrap_err().to_string();
        assert!(msg.contains("equation 1"), "{msg}");
        let mut unhashed = cert.clone();
        unhashed.point[1].terms.push((vec![], ValueJson::Rational("1".into())));
        assert!(unhashed.verify().is_err());
    }

    #[test]
    fn wrong_points_are_refused() {
        let sys = parse_system("x^3 + y^3").unwrap();
        let one = Polynomial::constant(0, Q::from_integer(1.into()));
        assert!(SolutionCertificate::build(&input(&sys.names, &sys.polys), &[one.clone(), one]).is_err());
    }
}
