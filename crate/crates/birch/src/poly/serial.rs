use serde::{Deserialize, Serialize};

use super::{Polynomial, VarNames};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar, Q};

/// Structured polynomial: the variable context plus
/// `[exponent-vector, coefficient-string]` pairs in increasing monomial
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, String)>,
}

pub fn polynomial_to_json<F: Scalar>(p: &Polynomial<F>, names: &VarNames) -> PolyJson {
    PolyJson {
        vars: names.names().to_vec(),
        terms: p
            .to_dense_terms()
            .into_iter()
            .map(|(e, c)| (e, c.to_string()))
            .collect(),
    }
}

/// Reads a rational polynomial back.
pub fn polynomial_from_json(j: &PolyJson) -> Result<(Polynomial<Q>, VarNames)> {
    let n = j.vars.len();
    let mut terms = Vec::with_capacity(j.terms.len());
    for (e, c) in &j.terms {
        if e.len() != n {
            return Err(Error::contract(format!(
                "exponent vector of length {} in a context of {n}",
                e.len()
            )));
        }
        let v = parse_rational(c)
            .ok_or_else(|| Error::contract(format!("bad rational coefficient `{c}`")))?;
        terms.push((e.clone(), v));
    }
    Ok((
        Polynomial::from_terms(n, terms),
        VarNames::new(j.vars.clone()),
    ))
}
