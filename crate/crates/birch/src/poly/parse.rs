//! Text format: rational coefficients, `^` powers, `*` or juxtaposition for
//! products, identifiers made of one letter followed by digits (`x`, `x12`,
//! `t1`). A system is a list of expressions or equations separated by `;`
//! or newlines.

use std::collections::BTreeSet;


use super::{format_polynomial, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar, Q};

/// Variable names of a context, sorted naturally (`x2` before `x10`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

fn natural_key(name: &str) -> (String, u64) {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (head, tail) = name.split_at(split);
    (head.to_string(), tail.parse().unwrap_or(0))
}

impl VarNames {
    pub fn new(names: Vec<String>) -> Self {
        VarNames { names }
    }

    pub fn sorted(set: impl IntoIterator<Item = String>) -> Self {
        let mut names: Vec<String> = set.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        names.sort_by_key(|n| natural_key(n));
        VarNames { names }
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn format<F: Scalar>(&self, p: &Polynomial<F>) -> String {
        format_polynomial(p, &self.names)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let s = &text[start..i];
            let v = parse_rational(s).ok_or(Error::Parse {
                position: start,
                message: format!("bad number `{s}`"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                position: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    names: &'a VarNames,
    offset: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p) + self.offset
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial<Q>> {
        let n = self.names.len();
        let mut acc = Polynomial::zero(n);
        let mut sign = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some(Tok::Op('+')) => sign = 1,
                Some(Tok::Op('-')) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial<Q>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match (d.degree(), d.leading()) {
                        (Some(0), Some((_, c))) => c.clone(),
                        _ => return self.err("division only by nonzero constants"),
                    };
                    acc = acc.scale(&c.recip());
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial<Q>> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(e)) if e.is_integer() && e >= <Q as num_traits::Zero>::zero() => {
                    self.pos += 1;
                    let e: u32 = e
                        .to_integer()
                        .try_into()
                        .or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial<Q>> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = match self.names.index(&name) {
                    Some(i) => i,
                    None => return self.err(format!("unknown variable `{name}`")),
                };
                Ok(Polynomial::monomial(n, Monomial::var(i, 1), <Q as num_traits::One>::one()))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

fn parse_expr(text: &str, offset: usize, names: &VarNames) -> Result<Polynomial<Q>> {
    let toks = tokenize(text).map_err(|e| shift(e, offset))?;
    if toks.is_empty() {
        return Err(Error::Parse {
            position: offset,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        names,
        offset,
        end: text.len(),
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + offset,
            message,
        },
        other => other,
    }
}

fn identifiers(text: &str) -> Result<BTreeSet<String>> {
    Ok(tokenize(text)?
        .into_iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => Some(s),
            _ => None,
        })
        .collect())
}

/// Parses one polynomial (or equation `lhs = rhs`, read as `lhs - rhs`).
/// With `names = None` the context is every identifier in the text.
pub fn parse_polynomial(text: &str, names: Option<&VarNames>) -> Result<(Polynomial<Q>, VarNames)> {
    let names = match names {
        Some(n) => n.clone(),
        None => VarNames::sorted(identifiers(&text.replace('=', " "))?),
    };
    let p = parse_equation(text, 0, &names)?;
    Ok((p, names))
}

fn parse_equation(text: &str, offset: usize, names: &VarNames) -> Result<Polynomial<Q>> {
    match text.split_once('=') {
        Some((lhs, rhs)) => {
            let l = parse_expr(lhs, offset, names)?;
            let r = parse_expr(rhs, offset + lhs.len() + 1, names)?;
            Ok(l.sub(&r))
        }
        None => parse_expr(text, offset, names),
    }
}

/// An ordered list of parsed polynomials over a shared context.
#[derive(Clone, Debug)]
pub struct ParsedSystem {
    pub names: VarNames,
    pub polys: Vec<Polynomial<Q>>,
}

/// Parses a system: one polynomial or equation per line or `;`-separated
/// item. Blank lines and `#` comments are ignored. Variables are indexed in
/// natural order of their names.
pub fn parse_system(text: &str) -> Result<ParsedSystem> {
    let mut items = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        let mut local = 0;
        for part in content.split(';') {
            let trimmed = part.trim_end_matches(['\n', '\r']);
            if !trimmed.trim().is_empty() {
                items.push((offset + local, trimmed.to_string()));
            }
            local += part.len() + 1;
        }
        offset += line.len();
    }
    let mut all = BTreeSet::new();
    for (off, item) in &items {
        all.extend(identifiers(&item.replace('=', " ")).map_err(|e| shift(e, *off))?);
    }
    let names = VarNames::sorted(all);
    let polys = items
        .iter()
        .map(|(off, item)| parse_equation(item, *off, &names))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedSystem { names, polys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    #[test]
    fn parses_implicit_products() {
        let (p, names) = parse_polynomial("x^3 + 2y^3 - 3z^3", None).unwrap();
        assert_eq!(names.names(), &["x", "y", "z"]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.evaluate(&[qf(1), qf(1), qf(1)]).unwrap(), qf(0));
        assert_eq!(names.format(&p), "x^3 + 2*y^3 - 3*z^3");
    }

    #[test]
    fn natural_variable_order() {
        let sys = parse_system("x10 + x2; x1^2").unwrap();
        assert_eq!(sys.names.names(), &["x1", "x2", "x10"]);
        assert_eq!(sys.polys.len(), 2);
    }

    #[test]
    fn equations_and_fractions() {
        let (p, names) = parse_polynomial("1/2*x^2 - (x - 1)^2 = 1", None).unwrap();
        assert_eq!(names.format(&p), "-1/2*x^2 + 2*x - 2");
    }

    #[test]
    fn reports_positions() {
        match parse_polynomial("x^2 + $", None) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x/y", None).is_err());
        assert!(parse_polynomial("x^y", None).is_err());
    }
}
