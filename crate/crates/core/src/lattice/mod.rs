//! Exact lattices with rational bases.
//!
//! Every [`Lattice`] stores its canonical basis: the Hermite normal form of the
//! lattice scaled by the least common denominator of its entries. Two lattices
//! are equal exactly when their canonical bases are equal.

mod cosets;
mod kernel;
pub mod matrix;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::rational::{self, from_big};
use crate::arith::Rational;
use crate::error::{Error, Result};

pub use cosets::{m_value, union_covers, CosetMap, CosetSystem, MValue, DEFAULT_COSET_CAP};
pub(crate) use kernel::combinations;
pub use kernel::{extend_to_full_rank, kernel_lattice, minors_vector, saturate, MinorVector};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    /// Canonical basis rows.
    basis: Vec<Vec<Rational>>,
    /// `denom * basis`, integral and in Hermite normal form.
    int_basis: Vec<Vec<BigInt>>,
    denom: BigInt,
    det_sq: Rational,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(rational::fmt_rational).collect())
            .collect();
        f.debug_struct("Lattice").field("dim", &self.dim).field("basis", &rows).finish()
    }
}

impl Lattice {
    /// Lattice with the given basis; the rows must be linearly independent.
    pub fn new(dim: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        check_dims(dim, &basis)?;
        let r = matrix::rank(&basis);
        if r < basis.len() {
            return Err(Error::RankDeficient { rank: r, rows: basis.len() });
        }
        Self::from_generators(dim, basis)
    }

    /// Lattice generated by arbitrary (possibly dependent) rational rows.
    pub fn from_generators(dim: usize, gens: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        check_dims(dim, &gens)?;
        let denom = rational::lcm_of_denominators(gens.iter().flatten());
        let scaled: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|row| row.iter().map(|x| (x * from_big(denom.clone())).to_integer()).collect())
            .collect();
        // The lcm of the generators' denominators is the least D with D*L integral,
        // a lattice invariant, so HNF(D*L)/D is canonical.
        let int_basis = matrix::hnf(&scaled);
        let denom_r = from_big(denom.clone());
        let basis: Vec<Vec<Rational>> = int_basis
            .iter()
            .map(|row| row.iter().map(|x| from_big(x.clone()) / &denom_r).collect())
            .collect();
        let det_sq = matrix::det(&matrix::gram(&basis));
        Ok(Self { dim, basis, int_basis, denom, det_sq })
    }

    /// `Z^n`.
    pub fn integer(dim: usize) -> Self {
        Self::diagonal(&vec![rational::int(1); dim]).expect("identity basis")
    }

    /// `diag(d) Z^n` for non-zero rational `d_i`.
    pub fn diagonal(d: &[Rational]) -> Result<Self> {
        let n = d.len();
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { Rational::zero() }).collect())
            .collect();
        Self::new(n, basis)
    }

    /// The rank-0 lattice `{0}` in `R^dim`.
    pub fn zero(dim: usize) -> Self {
        Self::from_generators(dim, vec![]).expect("zero lattice")
    }

    /// Lattice spanned by integer rows.
    pub fn from_int_rows(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| r.iter().map(|&x| rational::int(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Gram determinant of the basis, i.e. the squared determinant of the lattice.
    pub fn det_squared(&self) -> &Rational {
        &self.det_sq
    }

    /// Determinant of a full-rank lattice, `|det B|`, which is rational.
    pub fn det(&self) -> Option<Rational> {
        self.is_full_rank().then(|| matrix::det(&self.basis).abs())
    }

    /// Integer coordinates of `x` with respect to the canonical basis, if `x` is in the lattice.
    pub fn coordinates(&self, x: &[Rational]) -> Option<Vec<BigInt>> {
        if x.len() != self.dim {
            return None;
        }
        let d = from_big(self.denom.clone());
        let mut y = Vec::with_capacity(self.dim);
        for xi in x {
            let s = xi * &d;
            if !s.is_integer() {
                return None;
            }
            y.push(s.to_integer());
        }
        self.coordinates_of_scaled(y)
    }

    /// Coordinates of an integral point `x`.
    pub(crate) fn coordinates_of_integer(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if x.len() != self.dim {
            return None;
        }
        self.coordinates_of_scaled(x.iter().map(|v| v * &self.denom).collect())
    }

    /// Forward elimination of `y = denom * x` against the integral HNF basis.
    fn coordinates_of_scaled(&self, mut y: Vec<BigInt>) -> Option<Vec<BigInt>> {
        let mut coords = Vec::with_capacity(self.rank());
        let mut col = 0;
        for row in &self.int_basis {
            let pivot_col = row.iter().position(|v| !v.is_zero()).expect("nonzero HNF row");
            while col < pivot_col {
                if !y[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            let pivot = &row[pivot_col];
            if !(&y[pivot_col] % pivot).is_zero() {
                return None;
            }
            let c = &y[pivot_col] / pivot;
            for (yj, hj) in y.iter_mut().zip(row) {
                *yj -= &c * hj;
            }
            coords.push(c);
            col = pivot_col + 1;
        }
        y.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.coordinates(x).is_some()
    }

    /// Lattice vector with the given coordinates.
    pub fn point(&self, coords: &[BigInt]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let c = from_big(c.clone());
            for (xi, bi) in x.iter_mut().zip(row) {
                *xi += &c * bi;
            }
        }
        x
    }

    pub(crate) fn int_basis(&self) -> &[Vec<BigInt>] {
        &self.int_basis
    }

    pub(crate) fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.dim == other.dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// True when the canonical basis is diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<Rational>> {
        if !self.is_full_rank() {
            return None;
        }
        let mut d = Vec::with_capacity(self.dim);
        for (i, row) in self.basis.iter().enumerate() {
            if row.iter().enumerate().any(|(j, x)| j != i && !x.is_zero()) {
                return None;
            }
            d.push(row[i].clone());
        }
        Some(d)
    }

    /// Dual lattice `{y : <x, y> in Z for all x}` of a full-rank lattice.
    pub fn dual(&self) -> Result<Lattice> {
        if !self.is_full_rank() {
            return Err(Error::Unsupported("dual of a lattice that is not full rank".into()));
        }
        let inv = matrix::inverse(&self.basis).expect("full-rank basis is invertible");
        Lattice::new(self.dim, matrix::transpose(&inv, self.dim))
    }

    /// Sum `L_1 + ... + L_s`.
    pub fn sum(lattices: &[Lattice]) -> Result<Lattice> {
        let dim = lattices.first().map(Lattice::dim).ok_or_else(|| Error::InvalidInput("empty lattice list".into()))?;
        let gens = lattices.iter().flat_map(|l| l.basis.iter().cloned()).collect();
        Lattice::from_generators(dim, gens)
    }

    /// Intersection of full-rank lattices via `(L_1 ∩ L_2)^* = L_1^* + L_2^*`.
    pub fn intersect(lattices: &[Lattice]) -> Result<Lattice> {
        match lattices {
            [] => Err(Error::InvalidInput("empty lattice list".into())),
            [one] => Ok(one.clone()),
            _ => {
                let duals = lattices.iter().map(Lattice::dual).collect::<Result<Vec<_>>>()?;
                Lattice::sum(&duals)?.dual()
            }
        }
    }

    /// Index `[self : sub]` of a full-rank sublattice.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigInt> {
        if !sub.is_sublattice_of(self) {
            return Err(Error::NotSublattice);
        }
        let (Some(d_sub), Some(d_sup)) = (sub.det(), self.det()) else {
            return Err(Error::Unsupported("index of lattices that are not full rank".into()));
        };
        let idx = d_sub / d_sup;
        debug_assert!(idx.is_integer());
        Ok(idx.to_integer())
    }

    /// `t * L`.
    pub fn scaled(&self, t: &Rational) -> Result<Lattice> {
        if t.is_zero() {
            return Err(Error::InvalidInput("zero scale".into()));
        }
        let basis = self.basis.iter().map(|r| r.iter().map(|x| x * t).collect()).collect();
        Lattice::new(self.dim, basis)
    }
}

fn check_dims(dim: usize, rows: &[Vec<Rational>]) -> Result<()> {
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
    }
    Ok(())
}

/// Determinant sandwich for full-rank `L_i ⊆ L` with intersection `bar`:
/// `max det L_i <= det bar <= (det L)^(1-s) prod det L_i`, checked on squares.
pub fn det_sandwich_holds(ambient: &Lattice, parts: &[Lattice], bar: &Lattice) -> bool {
    let s = parts.len() as u32;
    if s == 0 {
        return true;
    }
    let lower = parts.iter().all(|p| p.det_squared() <= bar.det_squared());
    let prod: Rational = parts.iter().map(|p| p.det_squared().clone()).product();
    let upper = bar.det_squared() * rational::pow(ambient.det_squared(), s - 1) <= prod;
    lower && upper
}
