//! Exact dense linear algebra over the integers and the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<Rational>>;

/// Row echelon form over the rationals; returns the rank and the reduced rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    echelon(rows).len()
}

fn echelon(rows: &[Vec<Rational>]) -> RatMatrix {
    let mut a: RatMatrix = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..ncols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Determinant of a square rational matrix.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let pivot = a[c][c].clone();
        d *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Gram matrix `B B^T` of the rows of `b`.
pub fn gram(b: &[Vec<Rational>]) -> RatMatrix {
    b.iter()
        .map(|u| b.iter().map(|v| crate::arith::rational::dot(u, v)).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> RatMatrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Inverse of a square nonsingular rational matrix, by Gauss-Jordan elimination.
pub fn inverse(m: &[Vec<Rational>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let pivot = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..2 * n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Right inverse `W = B^T (B B^T)^-1` of a full-row-rank matrix, so `B W = I`.
pub fn right_inverse(b: &[Vec<Rational>], ncols: usize) -> Option<RatMatrix> {
    let g_inv = inverse(&gram(b))?;
    Some(mul(&transpose(b, ncols), &g_inv))
}

/// Row-style Hermite normal form of the lattice generated by integer rows.
///
/// Zero rows are dropped. Pivots are positive and entries above a pivot lie in
/// `[0, pivot)`, so the output is unique for the generated lattice.
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.to_vec();
    let m = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let Some(p) = (r..m)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
            else {
                break;
            };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                sub_row_multiple(&mut a, i, r, &q, c);
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                sub_row_multiple(&mut a, i, r, &q, c);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

fn sub_row_multiple(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt, from: usize) {
    let ncols = a[target].len();
    for j in from..ncols {
        let t = q * &a[source][j];
        a[target][j] -= t;
    }
}

/// Diagonalizes an integer matrix by unimodular row and column operations.
///
/// Returns the diagonal entries (non-negative) and the column transform `V`
/// with `U M V = diag` for some unimodular `U`.
pub fn diagonalize(m: &[Vec<BigInt>]) -> (Vec<BigInt>, IntMatrix) {
    let mut a: IntMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut v: IntMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                sub_row_multiple(&mut a, i, t, &q, t);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    (diag, v)
}

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}
