//! Regularization: replace a system of odd degree forms by odd degree
//! generators of no smaller ideal and, heuristically, higher strength.

use super::{combination_sequence, decomposition_search, DegreeTuple};
use crate::error::{Error, Result};
use crate::fields::SolverBudget;
use crate::poly::Polynomial;
use crate::scalar::{Scalar, Q};

/// A regularization threshold: a constant or a polynomial expression in
/// `r` (number of forms), `d` (largest degree) and `s` (sum of degrees),
/// floored at zero.
#[derive(Clone, Debug)]
pub struct Threshold {
    text: String,
    expr: Polynomial<Q>,
}

impl Threshold {
    pub fn parse(text: &str) -> Result<Self> {
        let names = crate::poly::VarNames::new(["r", "d", "s"].map(String::from).to_vec());
        let (expr, _) = crate::poly::parse_polynomial(text, Some(&names))?;
        Ok(Threshold {
            text: text.trim().to_string(),
            expr,
        })
    }

    pub fn constant(k: usize) -> Self {
        Threshold {
            text: k.to_string(),
            expr: Polynomial::constant(3, Q::from_integer((k as i64).into())),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn eval(&self, t: &DegreeTuple) -> usize {
        let q = |k: u64| Q::from_integer(k.into());
        let r = q(t.len() as u64);
        let d = q(t.entries().first().copied().unwrap_or(0) as u64);
        let s = q(t.entries().iter().map(|&e| e as u64).sum());
        let v = self.expr.evaluate(&[r, d, s]).unwrap_or_default();
        let f = v.floor().to_integer();
        usize::try_from(f).unwrap_or(if v > Q::default() { usize::MAX } else { 0 })
    }
}

impl PartialEq for Threshold {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

/// `input = sum_j cofactors[j] * generators[j]`.
#[derive(Clone, Debug)]
pub struct Membership {
    pub input: Polynomial<Q>,
    pub cofactors: Vec<Polynomial<Q>>,
}

impl Membership {
    pub fn verify(&self, generators: &[Polynomial<Q>]) -> bool {
        if self.cofactors.len() != generators.len() {
            return false;
        }
        let mut sum = Polynomial::zero(self.input.nvars());
        for (c, g) in self.cofactors.iter().zip(generators) {
            sum = sum.add(&c.mul(g));
        }
        sum.sub(&self.input).is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct RegularizationResult {
    pub generators: Vec<Polynomial<Q>>,
    pub memberships: Vec<Membership>,
    /// Degree tuples after each step, starting with the input's.
    pub trace: Vec<DegreeTuple>,
    /// One line per replacement.
    pub steps: Vec<String>,
    /// Strength of the output is only estimated by bounded search.
    pub heuristic: bool,
}

impl RegularizationResult {
    /// Re-checks every invariant from scratch.
    pub fn verify(&self) -> bool {
        let odd = self
            .generators
            .iter()
            .all(|g| g.degree().is_some_and(|d| d % 2 == 1) && g.is_homogeneous());
        let members = self.memberships.iter().all(|m| m.verify(&self.generators));
        let decreasing = self.trace.windows(2).all(|w| w[1] < w[0]);
        let bounded = match (self.trace.first(), self.trace.last()) {
            (Some(first), Some(last)) => last <= first && *last == DegreeTuple::of(&self.generators),
            _ => false,
        };
        odd && members && decreasing && bounded
    }

    pub fn degrees(&self) -> DegreeTuple {
        DegreeTuple::of(&self.generators)
    }
}

/// Working state: generators and, for every input, its cofactors.
struct State {
    gens: Vec<Polynomial<Q>>,
    rows: Vec<Vec<Polynomial<Q>>>,
}

impl State {
    /// Replaces generator `p` using
    /// `cp * g_p = sum_k even_k * odd_k + sum_j others_j * g_j`:
    /// the odd factors become new generators.
    fn replace(
        &mut self,
        p: usize,
        cp: &Q,
        others: &[(usize, Polynomial<Q>)],
        pairs: &[(Polynomial<Q>, Polynomial<Q>)],
    ) {
        let inv = cp.recip();
        let mut new_gens = Vec::new();
        let mut even = Vec::new();
        for (a, b) in pairs {
            let (o, e) = if a.degree().unwrap_or(0) % 2 == 1 { (a, b) } else { (b, a) };
            new_gens.push(o.clone());
            even.push(e.scale(&inv));
        }
        let old = self.gens.len();
        for row in &mut self.rows {
            let cf = row[p].clone();
            for e in &even {
                row.push(cf.mul(e));
            }
            if cf.is_zero() {
                continue;
            }
            for (j, c) in others {
                row[*j] = row[*j].add(&cf.mul(c).scale(&inv));
            }
        }
        debug_assert!(self.rows.iter().all(|r| r.len() == old + new_gens.len()));
        self.gens.extend(new_gens);
        self.gens.remove(p);
        for row in &mut self.rows {
            row.remove(p);
        }
    }
}

/// Regularizes odd degree forms.
///
/// Each round looks, degree by degree from the top, at sampled nontrivial
/// combinations of the current generators. A vanishing combination drops
/// its pivot generator; a combination with a found decomposition of at
/// most `threshold(tuple)` pairs replaces its pivot by the odd degree
/// factor of every pair. Either way the degree tuple strictly decreases,
/// so the loop ends. Membership cofactors are carried along exactly.
pub fn regularize(
    forms: &[Polynomial<Q>],
    threshold: &dyn Fn(&DegreeTuple) -> usize,
    budget: &SolverBudget,
) -> Result<RegularizationResult> {
    let n = forms.first().map(|f| f.nvars()).unwrap_or(0);
    for f in forms {
        if f.nvars() != n {
            return Err(Error::contract("forms must share one variable set"));
        }
        match f.degree() {
            Some(d) if d % 2 == 1 && f.is_homogeneous() => {}
            Some(d) if d % 2 == 0 => {
                return Err(Error::contract(format!("even degree {d} in regularization input")))
            }
            _ => return Err(Error::contract("regularization needs nonzero homogeneous forms")),
        }
    }
    let r = forms.len();
    let mut st = State {
        gens: forms.to_vec(),
        rows: (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Polynomial::one(n) } else { Polynomial::zero(n) })
                    .collect()
            })
            .collect(),
    };
    let mut trace = vec![DegreeTuple::of(&st.gens)];
    let mut steps = Vec::new();
    'outer: loop {
        let tuple = DegreeTuple::of(&st.gens);
        let phi = threshold(&tuple);
        let mut degrees: Vec<u32> = st.gens.iter().filter_map(|g| g.degree()).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees.dedup();
        for d in degrees {
            let idx: Vec<usize> = (0..st.gens.len()).filter(|&j| st.gens[j].degree() == Some(d)).collect();
            for combo in combination_sequence(idx.len(), budget.restarts as usize) {
                let terms: Vec<(usize, Q)> = idx
                    .iter()
                    .zip(&combo)
                    .filter(|(_, c)| **c != 0)
                    .map(|(&j, &c)| (j, Q::from_i64(c)))
                    .collect();
                let mut h = Polynomial::zero(n);
                for (j, c) in &terms {
                    h = h.add(&st.gens[*j].scale(c));
                }
                // pivot: the last generator involved, so earlier ones stay put
                let (p, cp) = terms.last().cloned().expect("nontrivial");
                let mut others: Vec<(usize, Polynomial<Q>)> = terms[..terms.len() - 1]
                    .iter()
                    .map(|(j, c)| (*j, Polynomial::constant(n, -c.clone())))
                    .collect();
                // reduce modulo lower degree generators: h = sum q_j g_j + rest
                for j in 0..st.gens.len() {
                    if st.gens[j].degree().is_some_and(|e| e < d) && !h.is_zero() {
                        let (q, rest) = h.div_rem(&st.gens[j]).expect("nonzero divisor");
                        if !q.is_zero() {
                            others.push((j, q));
                            h = rest;
                        }
                    }
                }
                if h.is_zero() {
                    st.replace(p, &cp, &others, &[]);
                    steps.push(format!("degree {d}: combination {combo:?} lies in the other generators; dropped"));
                } else if d >= 3 && h.is_homogeneous() {
                    match decomposition_search(&h, phi, budget)? {
                        Some(cert) => {
                            st.replace(p, &cp, &others, &cert.pairs);
                            steps.push(format!(
                                "degree {d}: combination {combo:?} has {} product pair(s)",
                                cert.len()
                            ));
                        }
                        None => continue,
                    }
                } else {
                    continue;
                }
                let next = DegreeTuple::of(&st.gens);
                debug_assert!(next < *trace.last().expect("nonempty"));
                trace.push(next);
                continue 'outer;
            }
        }
        break;
    }
    let memberships = forms
        .iter()
        .zip(st.rows)
        .map(|(f, cofactors)| Membership {
            input: f.clone(),
            cofactors,
        })
        .collect();
    let out = RegularizationResult {
        generators: st.gens,
        memberships,
        trace,
        steps,
        heuristic: true,
    };
    if !out.verify() {
        return Err(Error::Verification("regularization invariants".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VarNames};

    fn poly(s: &str) -> Polynomial<Q> {
        let names = VarNames::new(["x", "y", "z", "w"].map(String::from).to_vec());
        parse_polynomial(s, Some(&names)).unwrap().0
    }

    #[test]
    fn thresholds() {
        let t = Threshold::parse("2*r + d").unwrap();
        assert_eq!(t.eval(&DegreeTuple::new(vec![3, 5])), 9);
        assert_eq!(Threshold::parse("1/2*s - 10").unwrap().eval(&DegreeTuple::new(vec![3])), 0);
        assert_eq!(Threshold::constant(4).eval(&DegreeTuple::new(vec![])), 4);
    }

    #[test]
    fn single_reducible_cubic() {
        let r = regularize(&[poly("y*(x^2 + y^2)")], &|_| 1, &SolverBudget::default()).unwrap();
        assert_eq!(r.generators, vec![poly("y")]);
        assert_eq!(r.trace, vec![DegreeTuple::new(vec![3]), DegreeTuple::new(vec![1])]);
        assert_eq!(r.memberships[0].cofactors, vec![poly("x^2 + y^2")]);
    }

    #[test]
    fn two_cubics_with_shared_part() {
        let f1 = poly("x^3 + y^3");
        let f2 = poly("x^3 + y^3 + z*(w^2 + z^2)");
        let r = regularize(&[f1, f2], &|_| 1, &SolverBudget::default()).unwrap();
        assert!(r.verify());
        assert!(r.generators.contains(&poly("z")));
        assert!(r.trace.len() >= 3);
    }

    #[test]
    fn fixed_point_when_nothing_decomposes() {
        let f = poly("x^3 + 2*y^3 + 3*z^3 + x*y*z + x^2*z - y^2*x");
        let r = regularize(std::slice::from_ref(&f), &|_| 1, &SolverBudget::default()).unwrap();
        assert_eq!(r.generators, vec![f]);
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn rejects_even_degree() {
        assert!(regularize(&[poly("x^2")], &|_| 1, &SolverBudget::default()).is_err());
    }
}
