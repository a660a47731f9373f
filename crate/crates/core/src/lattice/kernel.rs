use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix;
use super::Lattice;
use crate::arith::rational::{self, from_big, serde_rational};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Basis of `ker A ∩ Z^n` for an integer matrix `A` of full row rank.
///
/// Row-reduces `[A^T | I]`; rows whose `A^T` part vanishes carry a kernel basis.
pub fn kernel_lattice(a: &[Vec<BigInt>], n: usize) -> Result<Lattice> {
    for row in a {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
    }
    let m = a.len();
    if matrix::rank(&matrix::to_rational(a)) < m {
        return Err(Error::RankDeficient { rank: matrix::rank(&matrix::to_rational(a)), rows: m });
    }
    let aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = a.iter().map(|r| r[i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let h = matrix::hnf(&aug);
    let basis: Vec<Vec<Rational>> = h
        .iter()
        .filter(|row| row[..m].iter().all(Zero::is_zero))
        .map(|row| row[m..].iter().map(|x| from_big(x.clone())).collect())
        .collect();
    debug_assert_eq!(basis.len(), n - m);
    Lattice::new(n, basis)
}

/// All `r x r` minors of the canonical basis, columns chosen in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorVector {
    #[serde(with = "serde_rational::vec")]
    pub entries: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub max_abs: Rational,
}

pub fn minors_vector(l: &Lattice) -> Result<MinorVector> {
    let r = l.rank();
    if r == 0 {
        return Err(Error::InvalidInput("minor vector of the zero lattice".into()));
    }
    let mut entries = Vec::new();
    for cols in combinations(l.dim(), r) {
        let sub: Vec<Vec<Rational>> = l
            .basis()
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        entries.push(matrix::det(&sub));
    }
    let max_abs = rational::max_abs(&entries);
    Ok(MinorVector { entries, max_abs })
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Full-rank sublattice of `ambient` containing `part`, obtained by adjoining
/// `scale * b` for canonical basis vectors `b` of `ambient` that complete the rank.
pub fn extend_to_full_rank(ambient: &Lattice, part: &Lattice, scale: u64) -> Result<Lattice> {
    if !ambient.is_full_rank() {
        return Err(Error::Unsupported("extension needs a full-rank ambient lattice".into()));
    }
    if !part.is_sublattice_of(ambient) {
        return Err(Error::NotSublattice);
    }
    if part.rank() >= ambient.rank() {
        return Err(Error::InvalidInput("sublattice already has full rank".into()));
    }
    if scale == 0 {
        return Err(Error::InvalidInput("scale must be positive".into()));
    }
    let s = rational::int(scale as i64);
    let mut rows: Vec<Vec<Rational>> = part.basis().to_vec();
    for b in ambient.basis() {
        if rows.len() == ambient.dim() {
            break;
        }
        let mut trial = rows.clone();
        trial.push(b.clone());
        if matrix::rank(&trial) == trial.len() {
            rows.push(b.iter().map(|x| x * &s).collect());
        }
    }
    Lattice::new(ambient.dim(), rows)
}

/// `ambient ∩ span(vectors)`, the primitive sublattice through the given vectors.
pub fn saturate(ambient: &Lattice, vectors: &[Vec<Rational>]) -> Result<Lattice> {
    let r = ambient.rank();
    if vectors.is_empty() {
        return Ok(Lattice::zero(ambient.dim()));
    }
    let inv = matrix::right_inverse(ambient.basis(), ambient.dim())
        .ok_or_else(|| Error::InvalidInput("degenerate ambient basis".into()))?;
    // coefficient vectors with respect to the ambient basis
    let coeffs: Vec<Vec<Rational>> = matrix::mul(vectors, &inv);
    let k = matrix::rank(&coeffs);
    if k < vectors.len() {
        return Err(Error::RankDeficient { rank: k, rows: vectors.len() });
    }
    if k == r {
        return Ok(ambient.clone());
    }
    let den = rational::lcm_of_denominators(coeffs.iter().flatten());
    let c_int: Vec<Vec<BigInt>> = coeffs
        .iter()
        .map(|row| row.iter().map(|x| (x * from_big(den.clone())).to_integer()).collect())
        .collect();
    let complement = kernel_lattice(&c_int, r)?;
    let y_int: Vec<Vec<BigInt>> = complement
        .basis()
        .iter()
        .map(|row| row.iter().map(|x| x.to_integer()).collect())
        .collect();
    let sat = kernel_lattice(&y_int, r)?;
    let rows: Vec<Vec<Rational>> = sat
        .basis()
        .iter()
        .map(|c| {
            let ci: Vec<BigInt> = c.iter().map(|x| x.to_integer()).collect();
            ambient.point(&ci)
        })
        .collect();
    Lattice::new(ambient.dim(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn imat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn kernels() {
        let k = kernel_lattice(&imat(&[&[1, 1, 1]]), 3).unwrap();
        assert_eq!(k.rank(), 2);
        assert_eq!(k.det_squared(), &int(3));
        let expected = Lattice::from_int_rows(3, &[vec![1, -1, 0], vec![0, 1, -1]]).unwrap();
        assert_eq!(k, expected);

        let k = kernel_lattice(&imat(&[&[2, 0, 0]]), 3).unwrap();
        assert_eq!(k.det_squared(), &int(1));
        assert_eq!(k, Lattice::from_int_rows(3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap());

        let k = kernel_lattice(&imat(&[&[1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(k.rank(), 0);

        let k = kernel_lattice(&imat(&[&[2, 1]]), 2).unwrap();
        assert_eq!(k, Lattice::from_int_rows(2, &[vec![1, -2]]).unwrap());

        assert!(matches!(
            kernel_lattice(&imat(&[&[1, 1], &[2, 2]]), 2),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn minors() {
        let mv = minors_vector(&Lattice::integer(2)).unwrap();
        assert_eq!(mv.entries, vec![int(1)]);
        let axis = Lattice::from_int_rows(2, &[vec![1, 0]]).unwrap();
        let mv = minors_vector(&axis).unwrap();
        assert_eq!(mv.entries, vec![int(1), int(0)]);
        assert_eq!(mv.max_abs, int(1));
        let k = kernel_lattice(&imat(&[&[1, 1, 1]]), 3).unwrap();
        let mv = minors_vector(&k).unwrap();
        assert!(mv.entries.iter().all(|e| num_traits::Signed::abs(e) == int(1)));
        let sq: Rational = mv.entries.iter().map(|e| e * e).sum();
        assert_eq!(&sq, k.det_squared());
    }

    #[test]
    fn extensions() {
        let z2 = Lattice::integer(2);
        let axis = Lattice::from_int_rows(2, &[vec![1, 0]]).unwrap();
        let ext = extend_to_full_rank(&z2, &axis, 10).unwrap();
        assert_eq!(ext, Lattice::from_int_rows(2, &[vec![1, 0], vec![0, 10]]).unwrap());
        let ext1 = extend_to_full_rank(&z2, &axis, 1).unwrap();
        assert!(axis.is_sublattice_of(&ext1) && ext1.is_sublattice_of(&z2));
        // part = ext ∩ lin(part)
        let back = saturate(&ext, axis.basis()).unwrap();
        assert_eq!(back, axis);
    }

    #[test]
    fn saturation() {
        let z3 = Lattice::integer(3);
        let s = saturate(&z3, &[vec![int(2), int(4), int(0)]]).unwrap();
        assert_eq!(s, Lattice::from_int_rows(3, &[vec![1, 2, 0]]).unwrap());
        let skew = Lattice::from_int_rows(2, &[vec![2, 1], vec![0, 3]]).unwrap();
        let s = saturate(&skew, &[vec![int(4), int(2)]]).unwrap();
        assert_eq!(s, Lattice::from_int_rows(2, &[vec![2, 1]]).unwrap());
    }
}
