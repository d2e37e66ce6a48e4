//! Exact dense linear algebra over any [`Scalar`] with decidable zero.

use crate::poly::UPoly;
use crate::scalar::{Scalar, Q};

pub type Matrix<F> = Vec<Vec<F>>;

fn is_zero<F: Scalar>(x: &F) -> bool {
    x.is_zero() || x.is_zero_exact() == Some(true)
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Scalar>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[i][j].sub(&f.mul(&m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Scalar>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}`; `ncols` is needed when `m` has no rows.
pub fn nullspace<F: Scalar>(m: &Matrix<F>, ncols: usize) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); ncols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = a[r][fc].neg();
            }
            v
        })
        .collect()
}

/// One solution of `a x = b`, if consistent.
pub fn solve<F: Scalar>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

pub fn determinant<F: Scalar>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !is_zero(&a[i][c])) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let v = a[i][j].sub(&f.mul(&a[c][j]));
                a[i][j] = v;
            }
        }
    }
    det
}

pub fn mat_vec<F: Scalar>(m: &Matrix<F>, v: &[F]) -> Vec<F> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
        })
        .collect()
}

/// Characteristic polynomial `det(x I - m)` by reduction to upper Hessenberg
/// form.
pub fn charpoly(m: &Matrix<Q>) -> UPoly<Q> {
    let n = m.len();
    let mut h = m.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !Scalar::is_zero(&h[i][c])) else {
            continue;
        };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let inv = h[c + 1][c].recip();
        for i in c + 2..n {
            if Scalar::is_zero(&h[i][c]) {
                continue;
            }
            let f = &h[i][c] * &inv;
            for j in 0..n {
                let v = &h[i][j] - &f * &h[c + 1][j];
                h[i][j] = v;
            }
            // similarity: column c+1 += f * column i
            for row in h.iter_mut() {
                let v = &row[c + 1] + &f * &row[i];
                row[c + 1] = v;
            }
        }
    }
    // p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_ik * prod_{j=i+1..k} h_{j,j-1} p_{i-1}
    let mut polys: Vec<UPoly<Q>> = vec![UPoly::constant(Q::one())];
    for k in 0..n {
        let mut pk = UPoly::new(vec![-h[k][k].clone(), Q::one()]).mul(&polys[k]);
        let mut prod = Q::one();
        for i in (0..k).rev() {
            prod = &prod * &h[i + 1][i];
            if Scalar::is_zero(&prod) {
                break;
            }
            let coef = &prod * &h[i][k];
            pk = pk.sub(&polys[i].scale(&coef));
        }
        polys.push(pk);
    }
    polys.pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|&x| qf(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn solve_and_det() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(determinant(&a), qf(5));
        let x = solve(&a, &[qf(3), qf(4)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![qf(3), qf(4)]);
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[qf(1), qf(2)]).is_none());
    }

    #[test]
    fn charpoly_matches_determinant() {
        let a = m(&[&[2, 1, 0, 3], &[1, 3, -1, 0], &[0, 4, 1, 2], &[5, 0, 1, -1]]);
        let cp = charpoly(&a);
        for x in [-2i64, 0, 1, 3, 7] {
            let shifted: Matrix<Q> = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let d = if i == j { qf(x) } else { qf(0) };
                            d - &a[i][j]
                        })
                        .collect()
                })
                .collect();
            assert_eq!(cp.eval(&qf(x)), determinant(&shifted));
        }
    }
}
