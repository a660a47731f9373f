use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::{self, IntMatrix};
use super::Lattice;
use crate::arith::rational::from_big;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Default cap on the number of cosets enumerated exactly.
pub const DEFAULT_COSET_CAP: u64 = 1_000_000;

/// Identifies cosets of a full-rank lattice modulo a full-rank sublattice.
///
/// The sublattice's coordinate matrix is diagonalized as `U M V = diag(d)`, so
/// the quotient is `⊕ Z/d_i` and a point with coordinates `c` maps to
/// `(c V) mod d`.
#[derive(Clone, Debug)]
pub struct CosetMap {
    ambient: Lattice,
    sub: Lattice,
    diag: Vec<BigInt>,
    transform: IntMatrix,
    index: BigInt,
}

impl CosetMap {
    pub fn new(ambient: &Lattice, sub: &Lattice) -> Result<Self> {
        if !ambient.is_full_rank() || !sub.is_full_rank() {
            return Err(Error::Unsupported("coset systems need full-rank lattices".into()));
        }
        if ambient.dim() != sub.dim() {
            return Err(Error::DimensionMismatch { expected: ambient.dim(), found: sub.dim() });
        }
        let m: IntMatrix = sub
            .basis()
            .iter()
            .map(|b| ambient.coordinates(b).ok_or(Error::NotSublattice))
            .collect::<Result<_>>()?;
        let (diag, transform) = matrix::diagonalize(&m);
        let index = diag.iter().product();
        Ok(Self { ambient: ambient.clone(), sub: sub.clone(), diag, transform, index })
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn sub(&self) -> &Lattice {
        &self.sub
    }

    /// Canonical label of the coset `x + sub`, or `None` if `x` is not in the ambient lattice.
    pub fn coset_id(&self, x: &[Rational]) -> Option<Vec<BigInt>> {
        let c = self.ambient.coordinates(x)?;
        Some(self.id_from_coords(&c))
    }

    pub(crate) fn id_from_coords(&self, c: &[BigInt]) -> Vec<BigInt> {
        let n = self.diag.len();
        (0..n)
            .map(|j| {
                let t: BigInt = c.iter().zip(&self.transform).map(|(ci, row)| ci * &row[j]).sum();
                if self.diag[j].is_zero() {
                    t
                } else {
                    t.mod_floor(&self.diag[j])
                }
            })
            .collect()
    }
}

/// Full list of coset representatives of `ambient / sub`.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    map: CosetMap,
    representatives: Vec<Vec<Rational>>,
}

impl CosetSystem {
    pub fn new(ambient: &Lattice, sub: &Lattice, cap: u64) -> Result<Self> {
        let map = CosetMap::new(ambient, sub)?;
        if map.index.to_u64().is_none_or(|i| i > cap) {
            return Err(Error::IndexOverflow { index: map.index.clone(), cap });
        }
        let n = map.diag.len();
        let v_inv = matrix::inverse(&matrix::to_rational(&map.transform)).expect("unimodular transform");
        let mut representatives = Vec::new();
        let mut t = vec![BigInt::zero(); n];
        loop {
            // coordinates w = t V^-1
            let w: Vec<BigInt> = (0..n)
                .map(|j| {
                    let s: Rational = t.iter().zip(&v_inv).map(|(ti, row)| from_big(ti.clone()) * &row[j]).sum();
                    debug_assert!(s.is_integer());
                    s.to_integer()
                })
                .collect();
            representatives.push(map.ambient.point(&w));
            // odometer over prod [0, d_i)
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(Self { map, representatives });
                }
                t[k] += 1;
                if t[k] < map.diag[k] {
                    break;
                }
                t[k] = BigInt::zero();
                k += 1;
            }
        }
    }

    pub fn index(&self) -> &BigInt {
        self.map.index()
    }

    pub fn representatives(&self) -> &[Vec<Rational>] {
        &self.representatives
    }

    pub fn map(&self) -> &CosetMap {
        &self.map
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MValue {
    /// `sum_i [L_i : bar] - s + 1`.
    pub m: BigInt,
    /// `min(m, [L : bar])`.
    pub m_claim: BigInt,
    /// `[L : bar]`.
    pub index: BigInt,
    pub intersection: Lattice,
}

/// Number of cosets modulo the intersection that can cover the forbidden union.
pub fn m_value(ambient: &Lattice, parts: &[Lattice]) -> Result<MValue> {
    if parts.is_empty() {
        return Err(Error::InvalidInput("m needs at least one sublattice".into()));
    }
    let bar = Lattice::intersect(parts)?;
    let index = ambient.index_of(&bar)?;
    let mut m = BigInt::from(1) - BigInt::from(parts.len());
    for p in parts {
        m += p.index_of(&bar)?;
    }
    let m_claim = m.clone().min(index.clone());
    Ok(MValue { m, m_claim, index, intersection: bar })
}

/// Whether the union of the given sublattices is all of `ambient`.
///
/// Lower-rank members cannot contribute to a cover of a full-rank lattice, so
/// only the full-rank members are tested, coset by coset modulo their intersection.
pub fn union_covers(ambient: &Lattice, parts: &[Lattice], cap: u64) -> Result<bool> {
    for p in parts {
        if !p.is_sublattice_of(ambient) {
            return Err(Error::NotSublattice);
        }
    }
    let full: Vec<Lattice> = parts.iter().filter(|p| p.is_full_rank()).cloned().collect();
    if full.is_empty() || !ambient.is_full_rank() {
        return Ok(false);
    }
    let bar = Lattice::intersect(&full)?;
    let system = CosetSystem::new(ambient, &bar, cap)?;
    Ok(system
        .representatives()
        .iter()
        .all(|r| full.iter().any(|p| p.contains(r))))
}
