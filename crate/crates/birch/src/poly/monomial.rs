use std::cmp::Ordering;

/// A monomial, stored as its exponent vector with trailing zeros removed.
///
/// Ordering is graded-lexicographic: total degree first, then exponents
/// compared from the first variable on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    /// The monomial `x_var^exp`.
    pub fn var(var: usize, exp: u32) -> Self {
        let mut exps = vec![0; var + 1];
        exps[var] = exp;
        Monomial::new(exps)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    /// Exponents of the stored prefix; variables past the end have exponent 0.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Dense exponent vector of length `nvars`.
    pub fn dense(&self, nvars: usize) -> Vec<u32> {
        let mut v = self.exps.clone();
        v.resize(nvars.max(v.len()), 0);
        v
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// One past the largest variable index that occurs.
    pub fn support_len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial { exps }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps = self.exps.clone();
        for (i, e) in other.exps.iter().enumerate() {
            if exps[i] < *e {
                return None;
            }
            exps[i] -= e;
        }
        Some(Monomial::new(exps))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Degree restricted to the given variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.exponent(v)).sum()
    }

    /// Relabels variable `i` as `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Monomial {
        let n = map.iter().copied().max().map_or(0, |m| m + 1);
        let mut exps = vec![0; n];
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                exps[map[i]] += e;
            }
        }
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_normalized() {
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::new(vec![1]));
        assert_eq!(Monomial::new(vec![0, 0]), Monomial::one());
    }

    #[test]
    fn graded_then_lex() {
        let x2 = Monomial::new(vec![2]);
        let xy = Monomial::new(vec![1, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        let x3 = Monomial::new(vec![3]);
        assert!(y2 < xy && xy < x2 && x2 < x3);
    }

    #[test]
    fn division() {
        let a = Monomial::new(vec![2, 1]);
        let b = Monomial::new(vec![1, 1]);
        assert_eq!(a.div(&b), Some(Monomial::new(vec![1])));
        assert_eq!(b.div(&a), None);
    }
}
