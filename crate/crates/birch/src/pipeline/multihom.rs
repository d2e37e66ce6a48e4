//! Multi-homogeneous systems where every form has odd degree in a
//! designated block.

use crate::error::{Error, Result};
use crate::fields::{BaseScalar, SolverBudget};
use crate::poly::{BlockGrading, Polynomial};
use crate::scalar::Scalar;

use super::leaf::{solve_leaf, Accept};

/// Forms on `V_1 x ... x V_k`, each multi-homogeneous, with the block in
/// which it has odd degree.
#[derive(Clone, Debug)]
pub struct MultihomSystem<F> {
    pub grading: BlockGrading,
    pub forms: Vec<Polynomial<F>>,
    pub odd_blocks: Vec<usize>,
    multidegrees: Vec<Vec<u32>>,
}

impl<F: Scalar> MultihomSystem<F> {
    /// Checks multi-homogeneity; picks for each form the block of least odd
    /// degree unless `odd_blocks` is given.
    pub fn new(grading: BlockGrading, forms: Vec<Polynomial<F>>, odd_blocks: Option<Vec<usize>>) -> Result<Self> {
        let k = grading.num_blocks();
        let mut multidegrees = Vec::with_capacity(forms.len());
        let mut chosen = Vec::with_capacity(forms.len());
        for (i, f) in forms.iter().enumerate() {
            let comps = grading.components(f)?;
            if f.is_zero() {
                multidegrees.push(vec![0; k]);
                chosen.push(0);
                continue;
            }
            if comps.len() != 1 {
                return Err(Error::contract(format!("form {i} is not multi-homogeneous")));
            }
            let md = comps.into_keys().next().expect("one component");
            let b = match &odd_blocks {
                Some(given) => {
                    let b = *given.get(i).ok_or_else(|| Error::contract("one odd block per form"))?;
                    if b >= k || md[b] % 2 == 0 {
                        return Err(Error::contract(format!("form {i} has even degree in block {b}")));
                    }
                    b
                }
                None => (0..k)
                    .filter(|&b| md[b] % 2 == 1)
                    .min_by_key(|&b| (md[b], b))
                    .ok_or_else(|| Error::contract(format!("form {i} has no block of odd degree")))?,
            };
            multidegrees.push(md);
            chosen.push(b);
        }
        Ok(MultihomSystem {
            grading,
            forms,
            odd_blocks: chosen,
            multidegrees,
        })
    }

    pub fn multidegree(&self, i: usize) -> &[u32] {
        &self.multidegrees[i]
    }

    /// An order of the blocks in which every form involves only blocks up
    /// to its odd block. Fixing earlier blocks then leaves odd degree forms
    /// in the current one.
    pub fn block_order(&self) -> Option<Vec<usize>> {
        let k = self.grading.num_blocks();
        let mut before = vec![vec![false; k]; k];
        for (i, f) in self.forms.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let b = self.odd_blocks[i];
            for c in 0..k {
                if c != b && self.multidegrees[i][c] > 0 {
                    before[b][c] = true;
                }
            }
        }
        let mut done = vec![false; k];
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            let next = (0..k).find(|&b| !done[b] && (0..k).all(|c| !before[b][c] || done[c]))?;
            done[next] = true;
            order.push(next);
        }
        Some(order)
    }
}

/// A common zero, nonzero on every block, with `avoid` nonzero and
/// `accept` holding at the point.
///
/// Blocks are fixed one at a time in [`MultihomSystem::block_order`]: the
/// forms whose odd block is the current one become odd degree forms in it
/// once the earlier blocks are fixed, and the leaf solver finds an exact
/// zero; blocks carrying no form are sampled. A block value that makes the
/// avoided polynomial vanish identically is rejected, and the whole
/// sequence restarts within the budget.
pub fn solve_multihomogeneous<F: BaseScalar>(
    system: &MultihomSystem<F>,
    avoid: Option<&Polynomial<F>>,
    accept: Option<Accept<F>>,
    budget: &SolverBudget,
) -> Result<Vec<F>> {
    let grading = &system.grading;
    let n = grading.nvars();
    if avoid.is_some_and(|g| g.nvars() != n) {
        return Err(Error::contract("avoided polynomial lives in another space"));
    }
    let order = system.block_order().ok_or_else(|| {
        Error::unsupported("no block order leaves an odd degree system at every step; the all-at-once system is cyclic")
    })?;
    for restart in 0..budget.restarts {
        let mut rng = budget.rng(0x3417 + restart as u64);
        let mut assigned: Vec<(usize, F)> = Vec::new();
        let mut failed = false;
        for (step, &b) in order.iter().enumerate() {
            let vars = grading.block(b).to_vec();
            let mut map = vec![0; n];
            for (l, &v) in vars.iter().enumerate() {
                map[v] = l;
            }
            let local: Vec<Polynomial<F>> = system
                .forms
                .iter()
                .enumerate()
                .filter(|(i, f)| !f.is_zero() && system.odd_blocks[*i] == b)
                .map(|(_, f)| f.partial_evaluate(&assigned).remap(&map, vars.len()))
                .collect();
            let last = step + 1 == order.len();
            let prefix = assigned.clone();
            let ok = |x: &[F]| {
                let mut all = prefix.clone();
                all.extend(vars.iter().copied().zip(x.iter().cloned()));
                if let Some(g) = avoid {
                    if g.partial_evaluate(&all).is_zero_exact() == Some(true) {
                        return false;
                    }
                }
                if last {
                    if let Some(acc) = accept {
                        let mut point = vec![F::zero(); n];
                        for (v, x) in &all {
                            point[*v] = x.clone();
                        }
                        return acc(&point);
                    }
                }
                true
            };
            match solve_leaf(vars.len(), &local, &ok, &mut rng, budget) {
                Ok(x) => assigned.extend(vars.iter().copied().zip(x)),
                Err(e) if e.is_not_found() => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            continue;
        }
        let mut point = vec![F::zero(); n];
        for (v, x) in assigned {
            point[v] = x;
        }
        let zero = system
            .forms
            .iter()
            .all(|f| f.evaluate(&point).is_ok_and(|v| v.is_zero_exact() == Some(true)));
        if !zero {
            return Err(Error::Verification("multi-homogeneous solution fails a form".into()));
        }
        return Ok(point);
    }
    Err(Error::not_found("multi-homogeneous solve", format!("{} restarts", budget.restarts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{lift, parse_polynomial, VarNames};
    use crate::scalar::RealAlg;

    fn poly(s: &str) -> Polynomial<RealAlg> {
        let names = VarNames::new(["a1", "a2", "b1", "b2"].map(String::from).to_vec());
        lift(&parse_polynomial(s, Some(&names)).unwrap().0)
    }

    #[test]
    fn linear_leaf_in_the_odd_block() {
        let grading = BlockGrading::consecutive(&[2, 2]);
        let f = poly("a1^2*b1 + b2");
        let sys = MultihomSystem::new(grading, vec![poly("a1^2*b1 + a2^2*b2")], None).unwrap();
        assert_eq!(sys.odd_blocks, vec![1]);
        let x = solve_multihomogeneous(&sys, None, None, &SolverBudget::default()).unwrap();
        assert!(sys.forms[0].evaluate(&x).unwrap().is_zero());
        // not multi-homogeneous
        assert!(MultihomSystem::new(BlockGrading::consecutive(&[2, 2]), vec![f], None).is_err());
    }

    #[test]
    fn pencil_system_avoids_the_next_coefficient() {
        // d = 3, two blocks: f1 = 3(a1^2 b1 + a2^2 b2), f2 = 3(a1 b1^2 + a2 b2^2)
        let grading = BlockGrading::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let f1 = poly("3*a1^2*b1 + 3*a2^2*b2");
        let f2 = poly("3*a1*b1^2 + 3*a2*b2^2");
        let sys = MultihomSystem::new(grading, vec![f1.clone()], None).unwrap();
        let x = solve_multihomogeneous(&sys, Some(&f2), None, &SolverBudget::default()).unwrap();
        assert!(f1.evaluate(&x).unwrap().is_zero());
        assert!(!f2.evaluate(&x).unwrap().is_zero());
    }

    #[test]
    fn empty_system_with_avoid() {
        let sys = MultihomSystem::new(BlockGrading::consecutive(&[2, 2]), Vec::new(), None).unwrap();
        let g = poly("a1");
        let x = solve_multihomogeneous(&sys, Some(&g), None, &SolverBudget::default()).unwrap();
        assert!(!x[0].is_zero());
    }

    #[test]
    fn cyclic_systems_are_reported() {
        let grading = BlockGrading::consecutive(&[2, 2]);
        let sys = MultihomSystem::new(grading, vec![poly("a1^2*b1"), poly("a1*b2^2")], None).unwrap();
        assert!(sys.block_order().is_none());
    }
}
