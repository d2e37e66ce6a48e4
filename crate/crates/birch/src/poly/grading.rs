use std::collections::BTreeMap;

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ordered partition of the variables `0..nvars` into blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGrading {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl BlockGrading {
    pub fn new(nvars: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; nvars];
        for (b, vars) in blocks.iter().enumerate() {
            for &v in vars {
                if v >= nvars {
                    return Err(Error::contract(format!(
                        "block {b} names variable {v} outside a context of {nvars}"
                    )));
                }
                if block_of[v] != usize::MAX {
                    return Err(Error::contract(format!("variable {v} is in two blocks")));
                }
                block_of[v] = b;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::contract(format!("variable {v} is in no block")));
        }
        Ok(BlockGrading { blocks, block_of })
    }

    /// Consecutive blocks of the given sizes.
    pub fn consecutive(sizes: &[usize]) -> Self {
        let mut blocks = Vec::new();
        let mut start = 0;
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        BlockGrading::new(start, blocks).expect("consecutive blocks form a partition")
    }

    pub fn nvars(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, var: usize) -> usize {
        self.block_of[var]
    }

    pub fn multidegree(&self, m: &Monomial) -> Vec<u32> {
        let mut out = vec![0; self.blocks.len()];
        for (i, &e) in m.exponents().iter().enumerate() {
            out[self.block_of[i]] += e;
        }
        out
    }

    /// Multi-homogeneous pieces of `f`, keyed by multidegree. The pieces sum
    /// to `f`.
    pub fn components<F: Scalar>(
        &self,
        f: &Polynomial<F>,
    ) -> Result<BTreeMap<Vec<u32>, Polynomial<F>>> {
        if f.nvars() != self.nvars() {
            return Err(Error::contract(format!(
                "grading covers {} variables, polynomial has {}",
                self.nvars(),
                f.nvars()
            )));
        }
        let mut out: BTreeMap<Vec<u32>, Polynomial<F>> = BTreeMap::new();
        for (m, c) in f.terms() {
            out.entry(self.multidegree(m))
                .or_insert_with(|| Polynomial::zero(f.nvars()))
                .add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Whether one block carries the whole degree.
    pub fn is_pure(multidegree: &[u32]) -> bool {
        multidegree.iter().filter(|&&e| e > 0).count() <= 1
    }

    /// Components with at least two blocks of positive degree.
    pub fn mixed_components<F: Scalar>(
        &self,
        f: &Polynomial<F>,
    ) -> Result<BTreeMap<Vec<u32>, Polynomial<F>>> {
        Ok(self
            .components(f)?
            .into_iter()
            .filter(|(k, _)| !Self::is_pure(k))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qf, Q};

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Polynomial<Q> {
        Polynomial::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), qf(*c))))
    }

    #[test]
    fn component_examples() {
        let g = BlockGrading::consecutive(&[1, 1]);
        let f = p(2, &[(&[3, 0], 1), (&[2, 1], 1), (&[0, 3], 1)]);
        let c = g.components(&f).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[&vec![2, 1]], p(2, &[(&[2, 1], 1)]));
        let f = p(2, &[(&[3], 1)]);
        assert_eq!(g.components(&f).unwrap().keys().collect::<Vec<_>>(), vec![&vec![3, 0]]);

        let g = BlockGrading::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let f = p(4, &[(&[1, 0, 1, 0], 1), (&[0, 1, 0, 1], 1), (&[2], 1)]);
        let c = g.components(&f).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&vec![2, 0]], p(4, &[(&[2], 1)]));
        assert_eq!(c[&vec![1, 1]], p(4, &[(&[1, 0, 1, 0], 1), (&[0, 1, 0, 1], 1)]));
        assert_eq!(g.mixed_components(&f).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(BlockGrading::new(2, vec![vec![0]]).is_err());
        assert!(BlockGrading::new(2, vec![vec![0, 1], vec![1]]).is_err());
        let g = BlockGrading::consecutive(&[1, 1]);
        assert!(g.components(&p(3, &[(&[0, 0, 1], 1)])).is_err());
    }
}
