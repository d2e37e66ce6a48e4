//! Orthogonal vectors and subspaces: no mixed terms after restriction.

use crate::error::{Error, Result};
use crate::fields::{BaseScalar, BirchField, SolverBudget};
use crate::poly::{BlockGrading, Polynomial};
use crate::scalar::{Scalar, Q};
use crate::strength::{collective_strength_bounds, StrengthBounds};

use super::leaf::{independent, random_vector, solve_leaf};
use super::multihom::{solve_multihomogeneous, MultihomSystem};

/// Result of [`is_orthogonal`]: the restriction `f(sum x_i v_i)` and the
/// values `f(v_i)`.
#[derive(Clone, Debug)]
pub struct OrthogonalityCheck<F> {
    pub holds: bool,
    pub restricted: Polynomial<F>,
    pub values: Vec<F>,
}

/// Whether `f(sum x_i v_i) = sum f(v_i) x_i^d` identically.
pub fn is_orthogonal<F: Scalar>(f: &Polynomial<F>, vectors: &[Vec<F>]) -> Result<OrthogonalityCheck<F>> {
    let restricted = f.substitute_linear(vectors)?;
    let d = f.degree().unwrap_or(0);
    let mut expected = Polynomial::zero(vectors.len());
    let mut values = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let value = f.evaluate(v)?;
        expected.add_term(crate::poly::Monomial::var(i, d), value.clone());
        values.push(value);
    }
    let holds = restricted.sub(&expected).is_zero_exact() == Some(true);
    Ok(OrthogonalityCheck {
        holds,
        restricted,
        values,
    })
}

/// Members of an orthogonal family.
#[derive(Clone, Debug)]
pub enum Members<F> {
    Vectors(Vec<Vec<F>>),
    /// Bases of subspaces.
    Subspaces(Vec<Vec<Vec<F>>>),
}

impl<F: Scalar> Members<F> {
    pub fn blocks(&self) -> Vec<Vec<Vec<F>>> {
        match self {
            Members::Vectors(vs) => vs.iter().map(|v| vec![v.clone()]).collect(),
            Members::Subspaces(bs) => bs.clone(),
        }
    }

    pub fn flat(&self) -> Vec<Vec<F>> {
        self.blocks().into_iter().flatten().collect()
    }
}

/// Vectors or subspaces with no mixed terms for every form, together with
/// the restricted forms that show it.
#[derive(Clone, Debug)]
pub struct OrthogonalFamily<F> {
    pub forms: Vec<Polynomial<F>>,
    pub members: Members<F>,
    /// `f(sum over all basis vectors)`, one per form, in the flattened
    /// basis variables.
    pub certificate: Vec<Polynomial<F>>,
    pub provenance: Vec<String>,
}

impl<F: Scalar> OrthogonalFamily<F> {
    /// Builds the certificate and checks it.
    pub fn new(forms: Vec<Polynomial<F>>, members: Members<F>, provenance: Vec<String>) -> Result<Self> {
        let flat = members.flat();
        let certificate = forms.iter().map(|f| f.substitute_linear(&flat)).collect::<Result<_>>()?;
        let out = OrthogonalFamily {
            forms,
            members,
            certificate,
            provenance,
        };
        if !out.verify() {
            return Err(Error::Verification("orthogonal family certificate".into()));
        }
        Ok(out)
    }

    pub fn grading(&self) -> BlockGrading {
        let sizes: Vec<usize> = self.members.blocks().iter().map(Vec::len).collect();
        BlockGrading::consecutive(&sizes)
    }

    /// Re-checks everything from the forms and members alone.
    pub fn verify(&self) -> bool {
        let flat = self.members.flat();
        if flat.is_empty() || !independent(&flat) {
            return false;
        }
        let grading = self.grading();
        self.forms.iter().zip(&self.certificate).all(|(f, cert)| {
            let Ok(g) = f.substitute_linear(&flat) else {
                return false;
            };
            if g.sub(cert).is_zero_exact() != Some(true) {
                return false;
            }
            match grading.mixed_components(&g) {
                Ok(mixed) => mixed.values().all(|p| p.is_zero_exact() == Some(true)),
                Err(_) => false,
            }
        })
    }

    pub fn len(&self) -> usize {
        match &self.members {
            Members::Vectors(v) => v.len(),
            Members::Subspaces(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Connected components of the graph joining variables that share a
/// monomial in some form. Variables in no form are singletons.
pub(crate) fn components<F: Scalar>(forms: &[Polynomial<F>], n: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for f in forms {
        for (m, _) in f.terms() {
            let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
            for w in vars.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

fn embed<F: Scalar>(local: &[F], coords: &[usize], n: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    for (x, &c) in local.iter().zip(coords) {
        v[c] = x.clone();
    }
    v
}

fn check_forms<F: Scalar>(forms: &[Polynomial<F>], odd: bool) -> Result<usize> {
    let n = forms.first().map(|f| f.nvars()).ok_or_else(|| Error::contract("no forms"))?;
    for f in forms {
        if f.nvars() != n {
            return Err(Error::contract("forms must share one variable set"));
        }
        if !f.is_homogeneous() {
            return Err(Error::contract("forms must be homogeneous"));
        }
        if odd && f.degree().is_some_and(|d| d % 2 == 0) {
            return Err(Error::contract("forms must have odd degree"));
        }
    }
    Ok(n)
}

/// `k` vectors in the span of `coords`, orthogonal for `f`, built one at a
/// time: the mixed terms between the span so far and a new vector `z` are
/// forms in `z` of degree below `d`, solved by the leaf solver.
fn greedy_in_component<F: BaseScalar>(
    f: &Polynomial<F>,
    coords: &[usize],
    k: usize,
    budget: &SolverBudget,
) -> Result<Vec<Vec<F>>> {
    let n = f.nvars();
    let m = coords.len();
    let local = f.substitute_linear(&coords.iter().map(|&c| embed(&[F::one()], &[c], n)).collect::<Vec<_>>())?;
    let d = local.degree().unwrap_or(0);
    let mut rng = budget.rng(0xb7a0 + coords[0] as u64);
    let mut vs: Vec<Vec<F>> = Vec::new();
    if m == 1 {
        vs.push(vec![F::one()]);
    } else {
        let mut first = None;
        for _ in 0..budget.restarts {
            let v: Vec<F> = random_vector(&mut rng, m, 2);
            if !local.evaluate(&v)?.is_zero() {
                first = Some(v);
                break;
            }
        }
        vs.push(first.unwrap_or_else(|| random_vector(&mut rng, m, 2)));
    }
    for j in 1..k {
        // variables: x_0..x_{j-1}, y, z_0..z_{m-1}
        let total = j + 1 + m;
        let images: Vec<Polynomial<F>> = (0..m)
            .map(|c| {
                let mut img = Polynomial::zero(total);
                for (i, v) in vs.iter().enumerate() {
                    img.add_term(crate::poly::Monomial::var(i, 1), v[c].clone());
                }
                img.add_term(crate::poly::Monomial::new(unit_exps(total, &[j, j + 1 + c])), F::one());
                img
            })
            .collect();
        let g = local.compose(&images, total);
        let head: Vec<usize> = (0..=j).collect();
        let map: Vec<usize> = (0..total).map(|v| v.saturating_sub(j + 1)).collect();
        let eqs: Vec<Polynomial<F>> = g
            .collect_in(&head)
            .into_iter()
            .filter(|(e, _)| e[j] >= 1 && e[j] < d)
            .map(|(_, c)| c.remap(&map, m))
            .collect();
        let sofar = vs.clone();
        let accept = |z: &[F]| {
            let mut all = sofar.clone();
            all.push(z.to_vec());
            independent(&all)
        };
        let z = solve_leaf(m, &eqs, &accept, &mut rng, budget)?;
        vs.push(z);
    }
    Ok(vs.into_iter().map(|v| embed(&v, coords, n)).collect())
}

fn unit_exps(n: usize, vars: &[usize]) -> Vec<u32> {
    let mut e = vec![0; n];
    for &v in vars {
        e[v] += 1;
    }
    e
}

/// `n` linearly independent `f`-orthogonal vectors. Variable components of
/// `f` give orthogonal coordinate blocks for free; further vectors inside
/// a component come from solving the mixed-term conditions one vector at
/// a time.
pub fn brauer_orthogonal_sequence<F: BaseScalar>(
    f: &Polynomial<F>,
    n: usize,
    budget: &SolverBudget,
) -> Result<OrthogonalFamily<F>> {
    let dim = check_forms(std::slice::from_ref(f), false)?;
    if n == 0 || n > dim {
        return Err(Error::contract(format!("need 1 <= n <= {dim}, got {n}")));
    }
    let d = f.degree().unwrap_or(0);
    let comps = components(std::slice::from_ref(f), dim);
    let mut counts: Vec<usize> = vec![0; comps.len()];
    for c in counts.iter_mut().take(n) {
        *c = 1;
    }
    let mut extra = n.saturating_sub(comps.len());
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(comps[i].len()));
    while extra > 0 {
        let Some(&i) = order.iter().find(|&&i| counts[i] < comps[i].len()) else {
            break;
        };
        let add = (comps[i].len() - counts[i]).min(extra);
        counts[i] += add;
        extra -= add;
    }
    let solving = d >= 3 && counts.iter().zip(&comps).any(|(&c, _)| c > 1);
    if solving && F::field() == BirchField::Rationals {
        return Err(Error::unsupported(
            "over Q the orthogonality conditions include even degree equations, which Q cannot solve",
        ));
    }
    let mut vectors = Vec::new();
    let mut provenance = Vec::new();
    for (comp, &k) in comps.iter().zip(&counts) {
        if k == 0 {
            continue;
        }
        if d <= 1 {
            vectors.extend(comp.iter().take(k).map(|&c| embed(&[F::one()], &[c], dim)));
            continue;
        }
        vectors.extend(greedy_in_component(f, comp, k, budget)?);
        provenance.push(format!("component {comp:?}: {k} vector(s)"));
    }
    OrthogonalFamily::new(vec![f.clone()], Members::Vectors(vectors), provenance)
}

/// Subspaces `V_1..V_{n+1}` mutually orthogonal for every form.
#[derive(Clone, Debug)]
pub struct BirchBlocks<F> {
    pub family: OrthogonalFamily<F>,
    /// The avoided polynomial restricted to `V_{n+1}`; nonzero.
    pub avoid_restriction: Option<Polynomial<F>>,
    /// Bounds for the forms restricted to each `V_j`, `j <= n`, when the
    /// restrictions have rational coefficients.
    pub strength: Vec<Option<StrengthBounds>>,
}

impl<F: Scalar> BirchBlocks<F> {
    pub fn blocks(&self) -> Vec<Vec<Vec<F>>> {
        self.family.members.blocks()
    }
}

fn as_rational_poly<F: Scalar>(f: &Polynomial<F>) -> Option<Polynomial<Q>> {
    let mut out = Polynomial::zero(f.nvars());
    for (m, c) in f.terms() {
        out.add_term(m.clone(), c.as_rational()?);
    }
    Some(out)
}

/// How many blocks of dimension `ell` the component packing can host while
/// leaving a nonzero residual block.
pub(crate) fn component_capacity<F: Scalar>(forms: &[Polynomial<F>], ell: usize, avoid: Option<&Polynomial<F>>) -> usize {
    let Some(dim) = forms.first().map(|f| f.nvars()) else {
        return 0;
    };
    let support: Vec<usize> = avoid.map(|g| g.support()).unwrap_or_default();
    let comps = components(forms, dim);
    let reserved = comps.iter().filter(|c| c.iter().any(|v| support.contains(v))).count();
    let free = comps.len() - reserved;
    if ell == 0 {
        0
    } else if reserved > 0 {
        free / ell
    } else {
        free.saturating_sub(1) / ell
    }
}

/// `n + 1` subspaces, the first `n` spanned by `ell` vectors each, with no
/// mixed terms for any form, and the avoided polynomial not identically
/// zero on the last one.
///
/// Variable components are packed first: distinct components never share
/// a monomial, so any grouping of them is orthogonal. Each of the first
/// `n` subspaces gets `ell` components, one vector from each, so its basis
/// is itself orthogonal; the last subspace is everything left. Without
/// enough components the mixed-term system is posed for unknown bases and
/// handed to [`solve_multihomogeneous`].
pub fn birch_orthogonal_blocks<F: BaseScalar>(
    forms: &[Polynomial<F>],
    n: usize,
    ell: usize,
    avoid: Option<&Polynomial<F>>,
    budget: &SolverBudget,
) -> Result<BirchBlocks<F>> {
    let dim = check_forms(forms, true)?;
    if ell == 0 {
        return Err(Error::contract("block dimension must be positive"));
    }
    if let Some(g) = avoid {
        if g.nvars() != dim {
            return Err(Error::contract("avoided polynomial lives in another space"));
        }
    }
    let comps = components(forms, dim);
    let mut rng = budget.rng(0xb1c4);
    let support: Vec<usize> = avoid.map(|g| g.support()).unwrap_or_default();
    let (reserved, free): (Vec<&Vec<usize>>, Vec<&Vec<usize>>) =
        comps.iter().partition(|c| c.iter().any(|v| support.contains(v)));
    let mut free = free;
    free.sort_by_key(|c| c.len());
    let members = if free.len() >= n * ell && (free.len() > n * ell || !reserved.is_empty()) {
        let mut blocks = Vec::new();
        for j in 0..n {
            let mut basis = Vec::new();
            for comp in &free[j * ell..(j + 1) * ell] {
                basis.push(component_vector(forms, comp, dim, &mut rng)?);
            }
            blocks.push(basis);
        }
        let last: Vec<Vec<F>> = free[n * ell..]
            .iter()
            .chain(reserved.iter())
            .flat_map(|c| c.iter().map(|&i| embed(&[F::one()], &[i], dim)))
            .collect();
        blocks.push(last);
        (blocks, format!("packed {} variable components", comps.len()))
    } else {
        (all_at_once(forms, n, ell, budget)?, "mixed-term system solved block by block".into())
    };
    let (blocks, how) = members;
    let last = blocks.last().expect("n + 1 blocks").clone();
    let avoid_restriction = match avoid {
        Some(g) => {
            let r = g.substitute_linear(&last)?;
            if r.is_zero_exact() == Some(true) {
                return Err(Error::not_found(
                    "orthogonal blocks",
                    "avoided polynomial vanishes on the last block",
                ));
            }
            Some(r)
        }
        None => None,
    };
    let strength = blocks[..n]
        .iter()
        .map(|b| {
            let restricted: Option<Vec<Polynomial<Q>>> = forms
                .iter()
                .map(|f| f.substitute_linear(b).ok().and_then(|r| as_rational_poly(&r)))
                .collect();
            restricted.and_then(|r| collective_strength_bounds(&r, budget).ok())
        })
        .collect();
    let family = OrthogonalFamily::new(forms.to_vec(), Members::Subspaces(blocks), vec![how])?;
    Ok(BirchBlocks {
        family,
        avoid_restriction,
        strength,
    })
}

/// A vector supported on one component, nonzero for every form that lives
/// there when sampling finds one.
fn component_vector<F: BaseScalar>(
    forms: &[Polynomial<F>],
    comp: &[usize],
    n: usize,
    rng: &mut impl rand::Rng,
) -> Result<Vec<F>> {
    if comp.len() == 1 {
        return Ok(embed(&[F::one()], comp, n));
    }
    let touching: Vec<&Polynomial<F>> = forms
        .iter()
        .filter(|f| f.support().iter().any(|v| comp.contains(v)))
        .collect();
    let mut fallback = None;
    for _ in 0..64 {
        let local: Vec<F> = random_vector(rng, comp.len(), 2);
        let v = embed(&local, comp, n);
        if touching.iter().all(|f| f.evaluate(&v).is_ok_and(|x| !x.is_zero())) {
            return Ok(v);
        }
        fallback.get_or_insert(v);
    }
    Ok(fallback.expect("sampled"))
}

/// Poses the vanishing of all mixed components for unknown bases of
/// `V_1..V_{n+1}` and solves it as a multi-homogeneous system.
fn all_at_once<F: BaseScalar>(
    forms: &[Polynomial<F>],
    n: usize,
    ell: usize,
    budget: &SolverBudget,
) -> Result<Vec<Vec<Vec<F>>>> {
    let dim = forms[0].nvars();
    let k = (n + 1) * ell;
    let unknowns = k * dim;
    if unknowns > 160 {
        return Err(Error::unsupported(format!(
            "too few variable components, and the mixed-term system has {unknowns} unknowns"
        )));
    }
    // variables: x_0..x_{k-1}, then the k basis vectors, coordinate-major per vector
    let total = k + unknowns;
    let images: Vec<Polynomial<F>> = (0..dim)
        .map(|c| {
            let mut img = Polynomial::zero(total);
            for a in 0..k {
                img.add_term(crate::poly::Monomial::new(unit_exps(total, &[a, k + a * dim + c])), F::one());
            }
            img
        })
        .collect();
    let x_grading = BlockGrading::consecutive(&vec![ell; n + 1]);
    let head: Vec<usize> = (0..k).collect();
    let map: Vec<usize> = (0..total).map(|v| v.saturating_sub(k)).collect();
    let mut equations = Vec::new();
    for f in forms {
        let g = f.compose(&images, total);
        for (e, c) in g.collect_in(&head) {
            let md = x_grading.multidegree(&crate::poly::Monomial::new(e));
            if !BlockGrading::is_pure(&md) {
                equations.push(c.remap(&map, unknowns));
            }
        }
    }
    let grading = BlockGrading::consecutive(&vec![ell * dim; n + 1]);
    let system = MultihomSystem::new(grading, equations, None)?;
    let accept = |x: &[F]| {
        let vs: Vec<Vec<F>> = x.chunks(dim).map(|c| c.to_vec()).collect();
        independent(&vs)
    };
    let point = solve_multihomogeneous(&system, None, Some(&accept), budget)?;
    let vs: Vec<Vec<F>> = point.chunks(dim).map(|c| c.to_vec()).collect();
    Ok(vs.chunks(ell).map(|b| b.to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{lift, parse_polynomial, VarNames};
    use crate::scalar::RealAlg;

    fn poly(s: &str, n: usize) -> Polynomial<RealAlg> {
        let names = VarNames::new((1..=n).map(|i| format!("x{i}")).collect());
        lift(&parse_polynomial(s, Some(&names)).unwrap().0)
    }

    fn e(n: usize, i: usize) -> Vec<RealAlg> {
        let mut v = vec![RealAlg::zero(); n];
        v[i] = RealAlg::one();
        v
    }

    #[test]
    fn orthogonality_examples() {
        assert!(is_orthogonal(&poly("x1^3 + x2^3", 2), &[e(2, 0), e(2, 1)]).unwrap().holds);
        assert!(!is_orthogonal(&poly("x1^2*x2", 2), &[e(2, 0), e(2, 1)]).unwrap().holds);
        let one = RealAlg::one();
        let zero = RealAlg::zero();
        let v1 = vec![one.clone(), one.clone(), zero.clone()];
        let v2 = vec![zero.clone(), zero, one];
        assert!(!is_orthogonal(&poly("x1*x2*x3", 3), &[v1, v2]).unwrap().holds);
    }

    #[test]
    fn brauer_examples() {
        let b = SolverBudget::default();
        let diag = poly("x1^3 + 2*x2^3 - x3^3", 3);
        let fam = brauer_orthogonal_sequence(&diag, 3, &b).unwrap();
        assert_eq!(fam.members.flat(), vec![e(3, 0), e(3, 1), e(3, 2)]);
        let f = poly("x1^3 + x2^3 + x1*x2*x3", 3);
        let fam = brauer_orthogonal_sequence(&f, 2, &b).unwrap();
        assert!(fam.verify());
        let check = is_orthogonal(&f, &fam.members.flat()).unwrap();
        assert!(check.holds);
        assert_eq!(brauer_orthogonal_sequence(&f, 1, &b).unwrap().len(), 1);
    }

    #[test]
    fn brauer_over_q_needs_even_degrees() {
        let names = VarNames::new((1..=3).map(|i| format!("x{i}")).collect());
        let f = parse_polynomial("x1^3 + x2^3 + x1*x2*x3", Some(&names)).unwrap().0;
        let err = brauer_orthogonal_sequence(&f, 2, &SolverBudget::default()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn birch_blocks_by_components() {
        let f = poly("x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6^3 + x1*x2*x3", 6);
        let g = poly("x1", 6);
        let blocks = birch_orthogonal_blocks(&[f], 1, 2, Some(&g), &SolverBudget::default()).unwrap();
        assert!(blocks.family.verify());
        assert_eq!(blocks.blocks().len(), 2);
        assert_eq!(blocks.blocks()[0].len(), 2);
        assert!(blocks.avoid_restriction.is_some());
    }

    #[test]
    fn coordinate_lines_for_a_diagonal_form() {
        let f = poly("x1^3 + x2^3 + x3^3", 3);
        let blocks = birch_orthogonal_blocks(&[f], 2, 1, None, &SolverBudget::default()).unwrap();
        assert_eq!(blocks.blocks(), vec![vec![e(3, 0)], vec![e(3, 1)], vec![e(3, 2)]]);
    }
}
