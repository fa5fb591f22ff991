//! Exact dense linear algebra over the scalar field.
//!
//! Small helper layer used by the reductive certificates and the
//! on-shell membership solver. Everything is exact: pivots are the
//! first nonzero entries, never magnitude-based.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<S: Scalar>(m: &mut Matrix<S>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].clone() / inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank<S: Scalar>(mut m: Matrix<S>) -> usize {
    rref(&mut m).len()
}

/// Basis of the right nullspace of `m` (vectors of length `cols`).
pub fn nullspace<S: Scalar>(mut m: Matrix<S>, cols: usize) -> Vec<Vec<S>> {
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![S::zero(); cols];
        v[f] = S::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of `a x = b`, or `None` when inconsistent.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the constant column
    }
    let mut x = vec![S::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Does `v` lie in the span of `basis`?
pub fn in_span<S: Scalar>(basis: &[Vec<S>], v: &[S]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let dim = v.len();
    // columns are basis vectors
    let a: Matrix<S> = (0..dim)
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    solve(&a, v).is_some()
}

/// Exact determinant by Gaussian elimination with exact pivots.
pub fn det<S: Scalar>(m: &Matrix<S>) -> S {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return S::zero();
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let piv = a[c][c].clone();
        acc = acc * piv.clone();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / piv.clone();
            for j in c..n {
                let delta = f.clone() * a[c][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    acc
}

/// Sylvester criterion: every leading principal minor positive.
pub fn is_positive_definite<S: Scalar>(m: &Matrix<S>) -> bool {
    let n = m.len();
    (1..=n).all(|k| {
        let lead: Matrix<S> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        det(&lead).is_positive()
    })
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![S::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let delta = a[i][l].clone() * b[l][j].clone();
                out[i][j] = out[i][j].clone() + delta;
            }
        }
    }
    out
}

pub fn mat_vec<S: Scalar>(a: &Matrix<S>, v: &[S]) -> Vec<S> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn transpose<S: Scalar>(a: &Matrix<S>) -> Matrix<S> {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    (0..m)
        .map(|j| (0..n).map(|i| a[i][j].clone()).collect())
        .collect()
}
